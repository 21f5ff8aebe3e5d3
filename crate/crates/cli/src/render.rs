//! Deterministic SVG rendering of polygons. Vertex coordinates are exact
//! rationals; the viewport multiplies everything by 24 times the least
//! common multiple of the coordinate denominators, so every emitted number
//! is an integer and identical inputs produce identical bytes.

use num_bigint::BigInt;
use num_integer::Integer;

use latticework::field::parse_big_rational;
use latticework::Error;
use serde_json::Value;

const BASE_UNIT: i64 = 24;
const PAD_UNITS: i64 = 1;

pub fn polygon_svg(vertices: &Value) -> Result<String, Error> {
    let list = vertices
        .as_array()
        .ok_or_else(|| Error::InvalidInput("vertices must be an array".into()))?;
    let mut points = Vec::with_capacity(list.len());
    for v in list {
        let pair = v
            .as_array()
            .filter(|p| p.len() == 2)
            .ok_or_else(|| Error::InvalidInput("vertex must be a pair".into()))?;
        let x = parse_big_rational(
            pair[0]
                .as_str()
                .ok_or_else(|| Error::InvalidInput("vertex coordinates are strings".into()))?,
        )?;
        let y = parse_big_rational(
            pair[1]
                .as_str()
                .ok_or_else(|| Error::InvalidInput("vertex coordinates are strings".into()))?,
        )?;
        points.push((x, y));
    }
    if points.is_empty() {
        return Err(Error::InvalidInput("polygon has no vertices".into()));
    }
    let mut scale = BigInt::from(BASE_UNIT);
    for (x, y) in &points {
        scale = scale.lcm(x.denom()).lcm(y.denom());
    }
    let px = |r: &latticework::polygon::Rational| -> BigInt { (r * &scale).to_integer() };
    let xs: Vec<BigInt> = points.iter().map(|(x, _)| px(x)).collect();
    // svg y grows downward; flip
    let ys: Vec<BigInt> = points.iter().map(|(_, y)| -px(y)).collect();
    let pad = &scale * BigInt::from(PAD_UNITS);
    let min_x = xs.iter().min().unwrap() - &pad;
    let max_x = xs.iter().max().unwrap() + &pad;
    let min_y = ys.iter().min().unwrap() - &pad;
    let max_y = ys.iter().max().unwrap() + &pad;
    let width = &max_x - &min_x;
    let height = &max_y - &min_y;

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{min_x} {min_y} {width} {height}\" width=\"480\">\n"
    ));
    // unit tick marks along both axes of the data range
    let tick = &scale / BigInt::from(8);
    let mut x = xs[0].clone();
    while x <= xs[xs.len() - 1] {
        out.push_str(&format!(
            "  <line x1=\"{x}\" y1=\"{}\" x2=\"{x}\" y2=\"{}\" stroke=\"#999\" stroke-width=\"{}\"/>\n",
            &ys[0] - &tick,
            &ys[0] + &tick,
            &scale / BigInt::from(24),
        ));
        x += &scale;
    }
    let poly_points: Vec<String> = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| format!("{x},{y}"))
        .collect();
    out.push_str(&format!(
        "  <polyline points=\"{}\" fill=\"none\" stroke=\"#003\" stroke-width=\"{}\"/>\n",
        poly_points.join(" "),
        &scale / BigInt::from(12),
    ));
    for (x, y) in xs.iter().zip(&ys) {
        out.push_str(&format!(
            "  <circle cx=\"{x}\" cy=\"{y}\" r=\"{}\" fill=\"#003\"/>\n",
            &scale / BigInt::from(8),
        ));
    }
    out.push_str("</svg>");
    Ok(out)
}
