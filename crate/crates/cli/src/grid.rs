use crate::failure::{Failure, Outcome};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Spacing {
    Linear,
    /// Log-spaced magnitudes in `[t_min, t_max]`, mirrored to negative values
    /// on the real line; zero is excluded.
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub t_min: f64,
    pub t_max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl Grid {
    pub const DEFAULT: Grid = Grid {
        t_min: 0.1,
        t_max: 10.0,
        count: 20,
        spacing: Spacing::Log,
    };

    /// Parses `tmin,tmax,count[,log]`.
    pub fn parse(text: &str) -> Outcome<Self> {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        let bad = |why: &str| Failure::Input(format!("grid \"{text}\": {why}"));
        if parts.len() < 3 || parts.len() > 4 {
            return Err(bad("expected tmin,tmax,count[,log]"));
        }
        let t_min: f64 = parts[0].parse().map_err(|_| bad("tmin is not a number"))?;
        let t_max: f64 = parts[1].parse().map_err(|_| bad("tmax is not a number"))?;
        let count: usize = parts[2]
            .parse()
            .map_err(|_| bad("count is not a non-negative integer"))?;
        let spacing = match parts.get(3) {
            None | Some(&"lin") | Some(&"linear") => Spacing::Linear,
            Some(&"log") => Spacing::Log,
            Some(other) => return Err(bad(&format!("unknown spacing {other}"))),
        };
        let grid = Grid {
            t_min,
            t_max,
            count,
            spacing,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Outcome {
        if self.count < 2 {
            return Err(Failure::Input(format!(
                "grid needs at least 2 points, got {}",
                self.count
            )));
        }
        if !(self.t_min.is_finite() && self.t_max.is_finite() && self.t_min < self.t_max) {
            return Err(Failure::Input(format!(
                "grid needs finite tmin < tmax, got {} and {}",
                self.t_min, self.t_max
            )));
        }
        if self.spacing == Spacing::Log
            && self.t_min.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater)
        {
            return Err(Failure::Input("log spacing needs tmin > 0".into()));
        }
        Ok(())
    }

    /// Points on the real line; log spacing is mirrored about the origin.
    pub fn real_line(&self) -> Vec<f64> {
        match self.spacing {
            Spacing::Linear => linear(self.t_min, self.t_max, self.count),
            Spacing::Log => {
                let positive = logarithmic(self.t_min, self.t_max, self.count.div_ceil(2));
                let mut pts: Vec<f64> = positive.iter().rev().map(|t| -t).collect();
                pts.extend(positive);
                if pts.len() > self.count {
                    pts.remove(0);
                }
                pts
            }
        }
    }

    /// Points on the half line; every point must be positive.
    pub fn half_line(&self) -> Outcome<Vec<f64>> {
        if self.t_min.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
            return Err(Failure::Input("half-line grids need tmin > 0".into()));
        }
        Ok(match self.spacing {
            Spacing::Linear => linear(self.t_min, self.t_max, self.count),
            Spacing::Log => logarithmic(self.t_min, self.t_max, self.count),
        })
    }
}

fn linear(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

fn logarithmic(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    let (la, lb) = (a.ln(), b.ln());
    (0..n)
        .map(|i| (la + (lb - la) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_validates() {
        let g = Grid::parse("0.1,10,20,log").unwrap();
        assert_eq!(g, Grid::DEFAULT);
        assert_eq!(Grid::parse("-1,1,5").unwrap().spacing, Spacing::Linear);
        for bad in [
            "1,2",
            "1,2,1",
            "1,2,0",
            "2,1,5",
            "0,1,5,log",
            "a,1,5",
            "1,2,5,cubic",
        ] {
            assert!(Grid::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn log_symmetric_grid() {
        let pts = Grid::DEFAULT.real_line();
        assert_eq!(pts.len(), 20);
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        for (a, b) in pts.iter().zip(pts.iter().rev()) {
            assert_eq!(*a, -*b);
        }
        assert!((pts[19] - 10.0).abs() < 1e-12 && (pts[10] - 0.1).abs() < 1e-15);

        let odd = Grid {
            count: 5,
            ..Grid::DEFAULT
        }
        .real_line();
        assert_eq!(odd.len(), 5);
        assert!(odd.iter().all(|t| *t != 0.0));
    }

    #[test]
    fn half_line_grid() {
        assert!(Grid::parse("-1,1,5").unwrap().half_line().is_err());
        let pts = Grid::parse("1,4,4").unwrap().half_line().unwrap();
        assert_eq!(pts, vec![1.0, 2.0, 3.0, 4.0]);
    }
}
