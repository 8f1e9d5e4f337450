use num_complex::Complex64;
use serde_json::{json, Map, Number, Value};

/// Float with 17 significant digits; non-finite values become null.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let text = format!("{x:.16e}");
    Value::Number(text.parse::<Number>().expect("formatted float is a JSON number"))
}

pub fn complex(z: Complex64) -> Value {
    json!({ "re": num(z.re), "im": num(z.im) })
}

pub fn object(pairs: Vec<(&str, Value)>) -> Value {
    let mut m = Map::new();
    for (k, v) in pairs {
        m.insert(k.to_string(), v);
    }
    Value::Object(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        let s = num(2f64.sqrt()).to_string();
        assert_eq!(s, "1.4142135623730951e+0");
        assert_eq!(num(f64::NAN), Value::Null);
        assert_eq!(num(0.1).to_string().parse::<f64>().unwrap(), 0.1);
    }
}
