//! Complex amplitudes written as `re+im i` (e.g. `0.6`, `-0.5i`, `0.3-0.4i`)
//! or in polar form `mag@phase` with the phase in radians.

use iontrap_teleport::C64;

pub fn parse_complex(text: &str) -> Result<C64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty value".into());
    }
    if let Some((mag, phase)) = s.split_once('@') {
        let mag = number(mag)?;
        let phase = number(phase)?;
        return Ok(C64::from_polar(mag, phase));
    }
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return Ok(C64::new(number(&s)?, 0.0));
    };
    // Split at the last sign that is neither leading nor an exponent sign.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => Ok(C64::new(number(&body[..k])?, imaginary(&body[k..])?)),
        None => Ok(C64::new(0.0, imaginary(body)?)),
    }
}

fn imaginary(coef: &str) -> Result<f64, String> {
    match coef {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => number(coef),
    }
}

fn number(s: &str) -> Result<f64, String> {
    s.parse::<f64>().map_err(|_| format!("cannot parse {s:?} as a number"))
}

/// Inverse of [`parse_complex`] in `re+im i` form, exact under round trip.
pub fn format_complex(z: C64) -> String {
    if z.im.is_sign_negative() {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}
