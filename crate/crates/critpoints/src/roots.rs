//! Real roots of univariate polynomials by isolation between the real
//! roots of the derivative.

/// Coefficients in ascending order of degree.
pub fn eval(p: &[f64], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

pub fn derivative(p: &[f64]) -> Vec<f64> {
    p.iter().enumerate().skip(1).map(|(i, &c)| c * i as f64).collect()
}

fn trim(p: &[f64]) -> Vec<f64> {
    let mut v = p.to_vec();
    while v.len() > 1 && v.last() == Some(&0.0) {
        v.pop();
    }
    v
}

fn bisect(p: &[f64], mut a: f64, mut b: f64) -> f64 {
    let mut fa = eval(p, a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = eval(p, m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Distinct real roots, ascending. A critical point of `p` where `|p|`
/// falls below `tol` times the size of `p` nearby counts as a (multiple)
/// root.
pub fn real_roots(p: &[f64], tol: f64) -> Vec<f64> {
    let p = trim(p);
    let n = p.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lead = p[n];
    if n == 1 {
        return vec![-p[0] / lead];
    }
    let bound = 1.0 + p[..n].iter().fold(0.0f64, |m, c| m.max((c / lead).abs()));
    let crit = real_roots(&derivative(&p), tol);
    let mut knots = vec![-bound];
    knots.extend(crit.iter().copied().filter(|c| c.abs() < bound));
    knots.push(bound);
    let size = |x: f64| p.iter().enumerate().map(|(i, c)| (c * x.powi(i as i32)).abs()).sum::<f64>();
    let mut out: Vec<f64> = Vec::new();
    let mut touching = vec![false; knots.len()];
    for (i, &k) in knots.iter().enumerate() {
        if i > 0 && i + 1 < knots.len() && eval(&p, k).abs() <= tol * size(k) {
            touching[i] = true;
            out.push(k);
        }
    }
    for i in 0..knots.len() - 1 {
        let (a, b) = (knots[i], knots[i + 1]);
        if touching[i] || touching[i + 1] {
            continue;
        }
        let (fa, fb) = (eval(&p, a), eval(&p, b));
        if fa == 0.0 {
            out.push(a);
        } else if (fa < 0.0) != (fb < 0.0) {
            out.push(bisect(&p, a, b));
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * (1.0 + a.abs()));
    out
}
