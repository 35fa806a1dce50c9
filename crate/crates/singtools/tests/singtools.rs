use polyser::{rat, Rat};
use singtools::*;

fn wp(t: &[(u32, u32, i64)]) -> WeightedPoly {
    WeightedPoly::from_ints(t)
}

fn in_space(lf: &LeadingForms, d: u32, p: &WeightedPoly) -> bool {
    let monos = monomials_of_weight(d);
    let v: Vec<Rat> = monos.iter().map(|&(a, b)| p.coeff(a, b)).collect();
    let mut rows = lf.space(d).to_vec();
    let before = rows.len();
    rows.push(v);
    polyser::linalg::rank(&rows) == before
}

#[test]
fn generators_of_x_and_y() {
    let i = w0_generators(&WeightedPoly::x()).unwrap();
    assert_eq!(i.generators[0], (wp(&[(1, 0, 2)]), MultiplierClass::MaximalIdeal));
    assert_eq!(i.generators[1], (wp(&[(0, 1, 2)]), MultiplierClass::FullRing));
    let reps = i.graded_membership(2, 8);
    assert!(!reps[0].spans_all);
    assert!(reps[1..].iter().all(|r| r.spans_all));

    let i = w0_generators(&WeightedPoly::y()).unwrap();
    let lf = i.leading_forms(10);
    assert!(lf.space(3).is_empty());
    for m in [(1, 1), (2, 0), (0, 2)] {
        assert!(in_space(&lf, weight(m), &WeightedPoly::monomial(m.0, m.1, rat(1, 1))));
    }
    assert!(i.graded_membership(4, 10).iter().all(|r| r.spans_all));
}

#[test]
fn f6_ideal() {
    let f6 = WeightedPoly::f6(rat(1, 1), rat(1, 1));
    let i = w0_generators(&f6).unwrap();
    assert_eq!(i.generators[0].0, f6.scale(&rat(6, 1)));
    assert_eq!(i.generators[1].0, wp(&[(2, 1, 12)]));
    assert!(i.graded_membership(9, 14).iter().all(|r| r.spans_all));
    let lf = i.leading_forms(14);
    assert_eq!(lf.report(7).leading_dim, 1);
    let r8 = lf.report(8);
    assert_eq!((r8.leading_dim, r8.witness), (1, Some((4, 0))));
    assert!(in_space(&lf, 8, &wp(&[(4, 0, 1), (1, 2, 1)])));

    let f = WeightedPoly::f6(rat(2, 1), rat(-3, 1));
    let lf = w0_generators(&f).unwrap().leading_forms(12);
    assert!(in_space(&lf, 8, &wp(&[(4, 0, 2), (1, 2, -3)])));
    assert!(lf.reports(9, 12).iter().all(|r| r.spans_all));
}

#[test]
fn quartic_jet_misses_y_squared() {
    let reps = w0_generators(&wp(&[(2, 0, 1)])).unwrap().graded_membership(6, 6);
    assert_eq!(reps[0].witness, Some((0, 2)));
    assert_eq!(reps[0].missing_dim, 1);
}

#[test]
fn xy_ideal_at_degree_six() {
    let lf = w0_generators(&wp(&[(1, 1, 1)])).unwrap().leading_forms(10);
    assert_eq!(lf.space(6).len(), 1);
    assert!(in_space(&lf, 6, &wp(&[(3, 0, 3), (0, 2, 2)])));
    assert!(!in_space(&lf, 6, &wp(&[(3, 0, 1), (0, 2, 1)])));
    assert!(!in_space(&lf, 6, &wp(&[(3, 0, 1)])));
    assert!(!in_space(&lf, 6, &wp(&[(0, 2, 1)])));
}

#[test]
fn determinacy_examples() {
    assert!(k_determined(&WeightedPoly::x(), 2, 6).unwrap().holds_on_window);
    let v = k_determined(&wp(&[(2, 0, 1)]), 4, 6).unwrap();
    assert!(!v.holds_on_window);
    assert_eq!(v.witness, Some((6, (0, 2))));
    // higher terms are ignored beyond the jet
    let v = k_determined(&wp(&[(1, 0, 1), (0, 2, 5)]), 2, 6).unwrap();
    assert!(v.holds_on_window);
}

#[test]
fn octic_jet_gaps() {
    let f8 = wp(&[(4, 0, 1), (1, 2, 1)]);
    let i = w0_generators(&f8).unwrap();
    assert_eq!(i.generators[0].0, f8.scale(&rat(8, 1)));
    assert_eq!(i.generators[1].0, wp(&[(3, 1, 14), (0, 3, 2)]));
    let v = k_determined(&f8, 8, 6).unwrap();
    assert!(!v.holds_on_window);
    let missing: Vec<u32> = v.degrees.iter().filter(|r| !r.spans_all).map(|r| r.degree).collect();
    assert_eq!(missing, vec![9, 10, 12]);
    let lf = i.leading_forms(14);
    for m in [(5, 0), (3, 1), (2, 2), (0, 3)] {
        let single = WeightedPoly::monomial(m.0, m.1, rat(1, 1));
        assert!(!in_space(&lf, weight(m), &single), "{m:?}");
    }
}

#[test]
fn adding_x4_leaves_the_ideal_unchanged() {
    let f6 = WeightedPoly::f6(rat(1, 1), rat(1, 1));
    let g = f6.add(&wp(&[(4, 0, 1)]));
    assert!(w0_equality(&f6, &g, 7, 14).unwrap());
    assert!(!w0_equality(&WeightedPoly::x(), &WeightedPoly::y(), 3, 3).unwrap());
    assert!(w0_equality(&g, &g, 0, 14).unwrap());
    // a quartic term is not negligible
    assert!(!w0_equality(&f6, &f6.add(&wp(&[(2, 0, 1)])), 4, 14).unwrap());
}

#[test]
fn scaling_preserves_the_ideal() {
    for f in case_representatives() {
        for c in [rat(-3, 1), rat(2, 7)] {
            assert!(w0_equality(&f, &f.scale(&c), 0, 14).unwrap(), "{f}");
        }
    }
}

#[test]
fn case_suite() {
    let verdicts: Vec<CaseVerdict> = case_representatives().iter().map(|h| classify_case(h).unwrap()).collect();
    let cases: Vec<u8> = verdicts.iter().map(|v| v.case).collect();
    assert_eq!(cases, vec![1, 2, 3, 4, 5, 6, 7]);
    let holds: Vec<bool> = verdicts.iter().map(|v| v.verdict.holds_on_window).collect();
    assert_eq!(holds, vec![true, true, false, false, false, false, false]);
    assert!(verdicts[..6].iter().all(CaseVerdict::reproduced));
    assert_eq!(verdicts[4].verdict.witness, Some((8, (4, 0))));
    assert_eq!(verdicts[5].verdict.witness, Some((8, (4, 0))));
    // case 7 is asserted determined but the ideal misses degree 9
    assert!(verdicts[6].asserted && !verdicts[6].reproduced());
}

#[test]
fn case_preconditions() {
    assert_eq!(
        classify_case(&wp(&[(3, 0, 1), (0, 2, -1)])),
        Err(SingError::NonGeneric("e6·d6·(e6+d6) = 0"))
    );
    assert_eq!(classify_case(&wp(&[(4, 0, 2), (1, 2, -2)])), Err(SingError::NonGeneric("e8·d8·(e8+d8) = 0")));
    assert_eq!(classify_case(&wp(&[(5, 0, 1)])), Err(SingError::TooDegenerate));
    assert_eq!(classify_case(&wp(&[(0, 0, 1)])), Err(SingError::ConstantTerm));
    // lower terms decide the case
    assert_eq!(classify_case(&wp(&[(0, 1, 1), (4, 0, 1)])).unwrap().case, 2);
}

#[test]
fn versal_unfoldings() {
    let y = WeightedPoly::y();
    assert!(versal_check(&y, &[(0, 0), (1, 0)], 14).versal);
    let v = versal_check(&y, &[(0, 0)], 14);
    assert_eq!(v.first_failure, Some((2, (1, 0))));

    let f6 = WeightedPoly::f6(rat(1, 1), rat(1, 1));
    assert!(versal_check(&f6, &F6_UNFOLDING, 16).versal);
    for (drop, degree) in [((2, 0), 4), ((3, 0), 6), ((4, 0), 8)] {
        let rest: Vec<Mono> = F6_UNFOLDING.iter().copied().filter(|m| *m != drop).collect();
        let v = versal_check(&f6, &rest, 16);
        assert!(!v.versal);
        assert_eq!(v.first_failure.map(|f| f.0), Some(degree), "{drop:?}");
    }
}

#[test]
fn parse_and_display() {
    let p: WeightedPoly = "3,0,1; 0,2,1/2".parse().unwrap();
    assert_eq!(p, WeightedPoly::f6(rat(1, 1), rat(1, 2)));
    assert_eq!(p.to_string(), "1/2·Y^2 + 1·X^3");
    assert!("3,0".parse::<WeightedPoly>().is_err());
    assert_eq!(monomials_of_weight(12), vec![(6, 0), (3, 2), (0, 4)]);
}
