//! Triangle quadrature rules in barycentric coordinates; weights sum to 1 and
//! are multiplied by the element area.

/// A rule as `(weight, barycentric point)` pairs.
pub type Rule = [(f64, [f64; 3])];

const DA: f64 = 0.445948490915965;
const DB: f64 = 0.108103018168070;
const DC: f64 = 0.091576213509771;
const DD: f64 = 0.816847572980459;
const WA: f64 = 0.223381589678011;
const WC: f64 = 0.109951743655322;

/// Six-point rule, exact for polynomials of degree 4.
pub static DEGREE4: [(f64, [f64; 3]); 6] = [
    (WA, [DB, DA, DA]),
    (WA, [DA, DB, DA]),
    (WA, [DA, DA, DB]),
    (WC, [DD, DC, DC]),
    (WC, [DC, DD, DC]),
    (WC, [DC, DC, DD]),
];

const GL5: [(f64, f64); 5] = [
    (0.5688888888888889, 0.0),
    (0.4786286704993665, -0.5384693101056831),
    (0.4786286704993665, 0.5384693101056831),
    (0.2369268850561891, -0.9061798459386640),
    (0.2369268850561891, 0.9061798459386640),
];

/// 25-point collapsed Gauss–Legendre rule, exact for degree 8.
pub fn degree8() -> Vec<(f64, [f64; 3])> {
    let mut out = Vec::with_capacity(25);
    for &(wu, su) in &GL5 {
        let u = 0.5 * (su + 1.0);
        for &(wv, sv) in &GL5 {
            let v = 0.5 * (sv + 1.0);
            let (x, y) = (u, v * (1.0 - u));
            // ¼ from the interval maps, (1 − u) from the collapse, 2 to normalize.
            out.push((0.5 * wu * wv * (1.0 - u), [1.0 - x - y, x, y]));
        }
    }
    out
}
