//! Value parsers for flags and config-file strings.
//!
//! All of them return `Err(String)` rather than panicking, whatever the
//! input: they are driven by command-line text, config files, and the
//! fuzzer.

use num_complex::Complex64;

/// A complex number as "re,im", or a bare real.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let s = s.trim();
    let bad = |part: &str| format!("expected a number, got {part:?}");
    match s.split_once(',') {
        None => {
            let re: f64 = s.parse().map_err(|_| bad(s))?;
            Ok(Complex64::new(re, 0.0))
        }
        Some((re, im)) => {
            let re: f64 = re.trim().parse().map_err(|_| bad(re.trim()))?;
            let im: f64 = im.trim().parse().map_err(|_| bad(im.trim()))?;
            Ok(Complex64::new(re, im))
        }
    }
}

/// A 2x2 matrix as four semicolon-separated complex entries "a;b;c;d",
/// row major.
pub fn parse_matrix(s: &str) -> Result<[Complex64; 4], String> {
    let parts: Vec<&str> = s.split(';').collect();
    if parts.len() != 4 {
        return Err(format!(
            "expected four entries \"a;b;c;d\", got {} part(s)",
            parts.len()
        ));
    }
    let mut out = [Complex64::ZERO; 4];
    for (slot, part) in out.iter_mut().zip(&parts) {
        *slot = parse_complex(part)?;
    }
    Ok(out)
}

/// Largest grid the sweep driver accepts; a guard against absurd counts.
pub const MAX_GRID_POINTS: usize = 1_000_000;

/// An inclusive grid "start:stop:count": `count` evenly spaced points with
/// both endpoints exact. A single-point grid needs start = stop.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err("expected \"start:stop:count\"".into());
    }
    let num = |part: &str| -> Result<f64, String> {
        let v: f64 = part
            .trim()
            .parse()
            .map_err(|_| format!("expected a number, got {:?}", part.trim()))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err("grid endpoints must be finite".into())
        }
    };
    let start = num(parts[0])?;
    let stop = num(parts[1])?;
    let count: usize = parts[2]
        .trim()
        .parse()
        .map_err(|_| format!("expected a point count, got {:?}", parts[2].trim()))?;
    if count == 0 {
        return Err("count must be at least 1".into());
    }
    if count > MAX_GRID_POINTS {
        return Err(format!("count {count} exceeds the limit {MAX_GRID_POINTS}"));
    }
    if count == 1 {
        if start != stop {
            return Err("a single-point grid needs start = stop".into());
        }
        return Ok(vec![start]);
    }
    let step = (stop - start) / (count - 1) as f64;
    let mut points: Vec<f64> = (0..count).map(|i| start + step * i as f64).collect();
    points[count - 1] = stop;
    Ok(points)
}
