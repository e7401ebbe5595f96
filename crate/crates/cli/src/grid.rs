use std::str::FromStr;

/// A list of evaluation points, written as `start:stop:count` (linear),
/// `start:stop:count:log` (geometric) or a comma-separated list.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<f64>);

fn number(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
    if !v.is_finite() {
        return Err(format!("`{s}` is not finite"));
    }
    Ok(v)
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let points = match parts.as_slice() {
            [start, stop, count] | [start, stop, count, _] => {
                let (a, b) = (number(start)?, number(stop)?);
                let n: usize = count.trim().parse().map_err(|_| format!("`{count}` is not a point count"))?;
                if n == 0 {
                    return Err("a grid needs at least one point".into());
                }
                let log = match parts.get(3).map(|m| m.trim()) {
                    None | Some("lin") => false,
                    Some("log") => true,
                    Some(other) => return Err(format!("grid spacing must be `lin` or `log`, got `{other}`")),
                };
                if log && !(a > 0.0 && b > 0.0) {
                    return Err("a log grid needs positive end points".into());
                }
                if n == 1 {
                    if a != b {
                        return Err(format!("a one-point grid needs start == stop, got {a} and {b}"));
                    }
                    vec![a]
                } else {
                    (0..n)
                        .map(|i| {
                            let t = i as f64 / (n - 1) as f64;
                            if log {
                                (a.ln() + t * (b.ln() - a.ln())).exp()
                            } else {
                                a + t * (b - a)
                            }
                        })
                        .collect()
                }
            }
            [list] => list.split(',').map(number).collect::<Result<Vec<_>, _>>()?,
            _ => return Err(format!("cannot read grid `{s}`")),
        };
        if points.is_empty() {
            return Err("empty grid".into());
        }
        Ok(Grid(points))
    }
}
