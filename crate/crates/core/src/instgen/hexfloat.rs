//! C99-style hexadecimal float strings (`%a`), e.g. `0x1.8p+1` for 3.0.
//!
//! The encoder emits the canonical form: normal numbers as `0x1.<frac>p<exp>`,
//! subnormals as `0x0.<frac>p-1022`, trailing zero digits trimmed. The decoder
//! accepts exactly those forms, so decode(encode(x)) is bit-identical for every
//! finite `x`. Infinities and NaN are written `inf`, `-inf` and `nan`.

const FRAC_BITS: u32 = 52;
const FRAC_DIGITS: usize = 13;
const FRAC_MASK: u64 = (1 << FRAC_BITS) - 1;

pub fn encode(x: f64) -> String {
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { "-" } else { "" };
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return format!("{sign}inf");
    }
    let biased = ((bits >> FRAC_BITS) & 0x7ff) as i32;
    let frac = bits & FRAC_MASK;
    if biased == 0 && frac == 0 {
        return format!("{sign}0x0p+0");
    }
    let (lead, exp) = if biased == 0 { (0, -1022) } else { (1, biased - 1023) };
    let digits = format!("{frac:013x}");
    let digits = digits.trim_end_matches('0');
    let exp_sign = if exp >= 0 { "+" } else { "-" };
    if digits.is_empty() {
        format!("{sign}0x{lead}p{exp_sign}{}", exp.abs())
    } else {
        format!("{sign}0x{lead}.{digits}p{exp_sign}{}", exp.abs())
    }
}

pub fn decode(s: &str) -> Result<f64, String> {
    let err = || format!("malformed hex float {s:?}");
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let sign_bit = if negative { 1u64 << 63 } else { 0 };
    match body {
        "inf" => return Ok(if negative { f64::NEG_INFINITY } else { f64::INFINITY }),
        "nan" if !negative => return Ok(f64::NAN),
        _ => {}
    }
    let body = body.strip_prefix("0x").ok_or_else(err)?;
    let (mantissa, exp) = body.split_once('p').ok_or_else(err)?;
    if !(exp.starts_with('+') || exp.starts_with('-')) {
        return Err(err());
    }
    let exp: i32 = exp.parse().map_err(|_| err())?;
    let (lead, frac_digits) = match mantissa.split_once('.') {
        Some((l, f)) if !f.is_empty() => (l, f),
        Some(_) => return Err(err()),
        None => (mantissa, ""),
    };
    if frac_digits.len() > FRAC_DIGITS || !frac_digits.bytes().all(|b| b.is_ascii_hexdigit()) {
        return Err(err());
    }
    let frac = if frac_digits.is_empty() {
        0
    } else {
        u64::from_str_radix(frac_digits, 16).map_err(|_| err())? << (4 * (FRAC_DIGITS - frac_digits.len()))
    };
    match lead {
        "0" if frac == 0 && exp == 0 => Ok(f64::from_bits(sign_bit)),
        "0" if exp == -1022 && frac != 0 => Ok(f64::from_bits(sign_bit | frac)),
        "1" if (-1022..=1023).contains(&exp) => {
            let biased = (exp + 1023) as u64;
            Ok(f64::from_bits(sign_bit | (biased << FRAC_BITS) | frac))
        }
        _ => Err(err()),
    }
}
