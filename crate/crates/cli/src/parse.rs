use idemsum_core::numerics::C64;
use idemsum_core::orbits::{parse_rational, to_f64, Rational};
use num_traits::Signed;

/// A real part given as a rational, a decimal, or a float literal.
fn real(s: &str) -> Result<f64, String> {
    let t = s.trim();
    if let Ok(q) = parse_rational(t) {
        return Ok(to_f64(&q));
    }
    t.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| format!("not a number: {s:?}"))
}

/// Accepts `re`, `re,im`, `a+bi`, `a-bi`, `bi` and `i`.
pub fn complex(s: &str) -> Result<C64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty complex number".into());
    }
    if let Some((a, b)) = t.split_once(',') {
        return Ok(C64::new(real(a)?, real(b)?));
    }
    let Some(body) = t.strip_suffix('i') else {
        return Ok(C64::new(real(&t)?, 0.0));
    };
    // Split before the last sign that is not a leading sign or an exponent sign.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&j| matches!(bytes[j], b'+' | b'-') && !matches!(bytes[j - 1], b'e' | b'E'));
    let (re_part, im_part) = match split {
        Some(j) => (&body[..j], &body[j..]),
        None => ("0", body),
    };
    let im = match im_part {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => real(other)?,
    };
    Ok(C64::new(real(re_part)?, im))
}

pub fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// Grid points `a, a + step, ...` not exceeding `b`.
pub fn grid(s: &str, max_points: usize) -> Result<Vec<Rational>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, step] = parts.as_slice() else {
        return Err(format!("grid must look like a:b:step, got {s:?}"));
    };
    let (a, b, step) = (rational(a)?, rational(b)?, rational(step)?);
    if !step.is_positive() {
        return Err("grid step must be positive".into());
    }
    if b < a {
        return Err("grid end lies before its start".into());
    }
    let mut out = Vec::new();
    let mut x = a;
    while x <= b {
        if out.len() == max_points {
            return Err(format!("grid has more than {max_points} points"));
        }
        out.push(x.clone());
        x += &step;
    }
    Ok(out)
}
