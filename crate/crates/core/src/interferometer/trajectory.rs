use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Piece of a semiclassical path at constant height and velocity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Segment<T> {
    /// Coordinate time spent on the segment (s).
    pub duration: T,
    /// Height above the laboratory origin (m).
    pub height: T,
    /// Speed along the horizontal arm (m/s).
    pub horizontal_speed: T,
    /// Speed along the field direction (m/s).
    pub vertical_speed: T,
}

impl<T: Real> Segment<T> {
    pub fn hold(duration: T, height: T, horizontal_speed: T) -> Self {
        Segment {
            duration,
            height,
            horizontal_speed,
            vertical_speed: T::zero(),
        }
    }

    pub fn speed(&self) -> T {
        self.horizontal_speed.hypot(self.vertical_speed)
    }
}

/// Which arm of the interferometer a trajectory belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Arm {
    /// Path `gamma_1`, carrying the reflection factor `i` after the first
    /// beam splitter.
    First,
    /// Path `gamma_2`, carrying the phase shifter.
    Second,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory<T> {
    arm: Arm,
    segments: Vec<Segment<T>>,
}

impl<T: Real> Trajectory<T> {
    pub fn new(arm: Arm, segments: Vec<Segment<T>>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidTrajectory("no segments".into()));
        }
        for (i, s) in segments.iter().enumerate() {
            if !(s.duration.is_finite() && s.duration >= T::zero()) {
                return Err(Error::InvalidTrajectory(format!(
                    "segment {i} duration {:e} must be finite and >= 0",
                    s.duration.to_f64_lossy()
                )));
            }
            if !(s.height.is_finite()
                && s.horizontal_speed.is_finite()
                && s.vertical_speed.is_finite())
            {
                return Err(Error::InvalidTrajectory(format!(
                    "segment {i} has non-finite kinematics"
                )));
            }
        }
        Ok(Trajectory { arm, segments })
    }

    pub fn arm(&self) -> Arm {
        self.arm
    }

    pub fn segments(&self) -> &[Segment<T>] {
        &self.segments
    }

    pub fn total_time(&self) -> T {
        self.segments
            .iter()
            .fold(T::zero(), |s, seg| s + seg.duration)
    }

    /// Time spent at each distinct speed, sorted by speed.
    pub(crate) fn speed_profile(&self) -> Vec<(T, T)> {
        let mut pairs: Vec<(T, T)> = self
            .segments
            .iter()
            .map(|s| (s.speed(), s.duration))
            .collect();
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite speeds"));
        let mut merged: Vec<(T, T)> = Vec::with_capacity(pairs.len());
        for (v, d) in pairs {
            match merged.last_mut() {
                Some(last) if (v - last.0).abs() <= T::exact_tol() * v.abs().max(T::one()) => {
                    last.1 = last.1 + d
                }
                _ => merged.push((v, d)),
            }
        }
        merged
    }

    /// Same segments with arms exchanged.
    pub fn relabelled(&self, arm: Arm) -> Self {
        Trajectory {
            arm,
            segments: self.segments.clone(),
        }
    }
}

/// Rectangular Mach-Zehnder geometry: the first arm rises by `delta_h` and
/// then holds for `delta_t`; the second holds at the origin height and rises
/// afterwards. Both move horizontally at the same constant speed, so their
/// speed profiles coincide.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RectangularLoop<T> {
    /// Vertical arm separation (m).
    pub delta_h: T,
    /// Hold time at constant heights (s).
    pub delta_t: T,
    /// Duration of the vertical legs (s); zero omits them.
    pub rise_time: T,
    pub horizontal_speed: T,
}

impl<T: Real> RectangularLoop<T> {
    pub fn new(delta_h: T, delta_t: T) -> Self {
        RectangularLoop {
            delta_h,
            delta_t,
            rise_time: T::zero(),
            horizontal_speed: T::zero(),
        }
    }

    pub fn paths(&self) -> Result<(Trajectory<T>, Trajectory<T>)> {
        if !(self.rise_time >= T::zero()) {
            return Err(Error::InvalidTrajectory("rise time must be >= 0".into()));
        }
        let hold_upper = Segment::hold(self.delta_t, self.delta_h, self.horizontal_speed);
        let hold_lower = Segment::hold(self.delta_t, T::zero(), self.horizontal_speed);
        let (upper, lower) = if self.rise_time > T::zero() {
            let rise = Segment {
                duration: self.rise_time,
                height: self.delta_h / T::lit(2.0),
                horizontal_speed: self.horizontal_speed,
                vertical_speed: self.delta_h / self.rise_time,
            };
            (vec![rise, hold_upper], vec![hold_lower, rise])
        } else {
            (vec![hold_upper], vec![hold_lower])
        };
        Ok((
            Trajectory::new(Arm::First, upper)?,
            Trajectory::new(Arm::Second, lower)?,
        ))
    }
}
