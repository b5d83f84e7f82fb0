//! Generators and properties shared by the property suites.
#![allow(dead_code)]

use num::Zero;
use ordercert_core::exactpl::{int, rat, PLCocycle, PLMap, Rational};
use ordercert_core::skew::{Gen, Point, SkewElement};
use proptest::collection::vec;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

/// Knots of a lift on `[0,1)`, extended by one period on both sides, then
/// linearly interpolated. `lift` is 1 for maps and 0 for cocycles.
pub fn interpolate(pts: &[(Rational, Rational)], lift: i64, x: &Rational) -> Rational {
    let k = x.floor();
    let r = x - &k;
    let l = int(lift);
    let last = &pts[pts.len() - 1];
    let mut knots = vec![(&last.0 - int(1), &last.1 - &l)];
    knots.extend(pts.iter().cloned());
    knots.push((&pts[0].0 + int(1), &pts[0].1 + &l));
    let i = knots
        .windows(2)
        .position(|w| w[0].0 <= r && r < w[1].0)
        .expect("knots cover a period");
    let ((x0, y0), (x1, y1)) = (&knots[i], &knots[i + 1]);
    y0 + (&r - x0) * (y1 - y0) / (x1 - x0) + k * l
}

fn positions(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    (vec(1i64..6, n), 0i64..6, 0i64..4).prop_map(|(gaps, extra, offset)| {
        let d = offset + gaps.iter().sum::<i64>() + extra + 1;
        let mut acc = offset;
        gaps.iter()
            .map(|g| {
                let x = rat(acc, d);
                acc += g;
                x
            })
            .collect()
    })
}

pub fn pl_map() -> impl Strategy<Value = PLMap> {
    (1usize..5)
        .prop_flat_map(|n| (positions(n), vec(1i64..6, n), 0i64..6, -12i64..12))
        .prop_map(|(xs, gaps, extra, y0)| {
            let e = gaps.iter().sum::<i64>() + extra;
            let mut acc = 0;
            let pts: Vec<_> = xs
                .into_iter()
                .zip(&gaps)
                .map(|(x, g)| {
                    let y = rat(y0, 6) + rat(acc, e);
                    acc += g;
                    (x, y)
                })
                .collect();
            PLMap::new(&pts).expect("increasing with rise below one")
        })
}

pub fn cocycle() -> impl Strategy<Value = PLCocycle> {
    (1usize..5)
        .prop_flat_map(|n| (positions(n), vec((-24i64..24, 1i64..7), n)))
        .prop_map(|(xs, ys)| {
            let pts: Vec<_> = xs.into_iter().zip(ys).map(|(x, (p, q))| (x, rat(p, q))).collect();
            PLCocycle::new(&pts).expect("distinct sorted knots")
        })
}

pub fn rational() -> impl Strategy<Value = Rational> {
    (-200i64..200, 1i64..60).prop_map(|(p, q)| rat(p, q))
}

pub fn point() -> impl Strategy<Value = Point> {
    (rational(), rational())
}

pub fn skew_element() -> impl Strategy<Value = SkewElement> {
    (pl_map(), cocycle()).prop_map(|(m, c)| SkewElement::new(m, c))
}

pub fn generator() -> impl Strategy<Value = Gen> {
    prop::sample::select(Gen::ALL.to_vec())
}

/// Letters `g^±1`, unreduced.
pub fn letters(max_len: usize) -> impl Strategy<Value = Vec<(Gen, i64)>> {
    vec((generator(), prop::bool::ANY.prop_map(|b| if b { 1 } else { -1 })), 0..=max_len)
}

pub fn associativity(f: &PLMap, g: &PLMap, h: &PLMap) -> Result<(), TestCaseError> {
    prop_assert_eq!(f.compose(g).compose(h), f.compose(&g.compose(h)));
    Ok(())
}

pub fn composition_order(f: &PLMap, g: &PLMap, x: &Rational) -> Result<(), TestCaseError> {
    let direct = interpolate(g.breakpoints(), 1, &interpolate(f.breakpoints(), 1, x));
    prop_assert_eq!(f.compose(g).eval(x), direct);
    Ok(())
}

pub fn inverse(f: &PLMap, x: &Rational) -> Result<(), TestCaseError> {
    let inv = f.invert();
    prop_assert!(f.compose(&inv).is_identity());
    prop_assert!(inv.compose(f).is_identity());
    prop_assert_eq!(&inv.eval(&f.eval(x)), x);
    Ok(())
}

pub fn equivariance(f: &PLMap, c: &PLCocycle, x: &Rational, k: i64) -> Result<(), TestCaseError> {
    let shifted = x + int(k);
    prop_assert_eq!(f.eval(&shifted), f.eval(x) + int(k));
    prop_assert_eq!(f.eval(x), interpolate(f.breakpoints(), 1, x));
    prop_assert_eq!(c.eval(&shifted), c.eval(x));
    prop_assert_eq!(c.eval(x), interpolate(c.breakpoints(), 0, x));
    Ok(())
}

pub fn idempotence(f: &PLMap, c: &PLCocycle) -> Result<(), TestCaseError> {
    prop_assert_eq!(&PLMap::new(f.breakpoints()).unwrap(), f);
    prop_assert_eq!(&PLCocycle::new(c.breakpoints()).unwrap(), c);
    // A knot inserted on an existing segment must be removed again.
    let bp = f.breakpoints();
    let next = if bp.len() > 1 { bp[1].0.clone() } else { &bp[0].0 + int(1) };
    let x = (&bp[0].0 + next) / int(2);
    let x = &x - x.floor();
    let mut pts = bp.to_vec();
    pts.push((x.clone(), f.eval(&x)));
    prop_assert_eq!(&PLMap::new(&pts).unwrap(), f);
    let mut pts = c.breakpoints().to_vec();
    pts.push((x.clone(), c.eval(&x)));
    prop_assert_eq!(&PLCocycle::new(&pts).unwrap(), c);
    Ok(())
}

pub fn pullback(c: &PLCocycle, f: &PLMap, x: &Rational) -> Result<(), TestCaseError> {
    let expected = interpolate(c.breakpoints(), 0, &interpolate(f.breakpoints(), 1, x));
    prop_assert_eq!(c.pullback(f).eval(x), expected);
    Ok(())
}

pub fn cocycle_laws(a: &PLCocycle, b: &PLCocycle, x: &Rational) -> Result<(), TestCaseError> {
    prop_assert!(a.add(&a.negate()).is_zero());
    prop_assert_eq!(a.add(b), b.add(a));
    prop_assert_eq!(a.add(b).eval(x), a.eval(x) + b.eval(x));
    prop_assert!(PLCocycle::zero().eval(x).is_zero());
    Ok(())
}
