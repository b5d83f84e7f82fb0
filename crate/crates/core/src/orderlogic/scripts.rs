//! Derivation generators for the key inequality lemma and the main theorem.

use super::derivation::{
    Assumption, Block, Bound, Branch, Derivation, Goal, Hypothesis, Judgment, Rule, Side, Split, SplitRule, Step,
};
use super::facts::{lemma_table, mirrored_atoms, mirrored_facts, primary_atoms, primary_facts, LemmaAtoms, LemmaFacts};
use super::word::Word;

/// Hands out globally unique ids.
#[derive(Default)]
struct Ctx {
    n: usize,
}

impl Ctx {
    fn id(&mut self, prefix: &str) -> String {
        self.n += 1;
        format!("{prefix}{}", self.n)
    }

    fn step(&mut self, out: &mut Vec<Step>, rule: Rule, premises: &[&str], facts: &[&str], conclusion: Judgment) -> String {
        let id = self.id("s");
        out.push(Step {
            id: id.clone(),
            rule,
            premises: premises.iter().map(|s| s.to_string()).collect(),
            facts: facts.iter().map(|s| s.to_string()).collect(),
            conclusion,
        });
        id
    }

    /// Opens a split whose branches are produced in order by `body`, which
    /// receives the branch index and the ids of that branch's assumptions.
    fn split(
        &mut self,
        rule: SplitRule,
        premises: &[&str],
        assumptions: Vec<Vec<Judgment>>,
        mut body: impl FnMut(&mut Ctx, usize, Vec<String>) -> Block,
    ) -> Box<Split> {
        let id = self.id("split");
        let mut branches = Vec::new();
        for (i, js) in assumptions.into_iter().enumerate() {
            let bid = self.id("br");
            let assume: Vec<Assumption> =
                js.into_iter().map(|judgment| Assumption { id: self.id("as"), judgment }).collect();
            let ids = assume.iter().map(|a| a.id.clone()).collect();
            let body = body(self, i, ids);
            branches.push(Branch { id: bid, assume, body });
        }
        Box::new(Split { id, rule, premises: premises.iter().map(|s| s.to_string()).collect(), branches })
    }
}

fn lt(l: Word, r: Word) -> Judgment {
    Judgment::less(l, r)
}

fn trichotomy_cases(l: &Word, r: &Word) -> Vec<Vec<Judgment>> {
    vec![
        vec![lt(l.clone(), r.clone())],
        vec![Judgment::equal(l.clone(), r.clone())],
        vec![lt(r.clone(), l.clone())],
    ]
}

fn window_cases(v: &Word, t: &Word, n1: i64, n2: i64) -> Vec<Vec<Judgment>> {
    let mut out = Vec::new();
    for k in n1..n2 {
        if k > n1 {
            out.push(vec![Judgment::equal(v.clone(), t.pow(k))]);
        }
        out.push(vec![lt(t.pow(k), v.clone()), lt(v.clone(), t.pow(k + 1))]);
    }
    out
}

/// Closes a branch whose assumption is `u = 1` or `u = v` with a separating fact.
fn close_distinct(cx: &mut Ctx, eq_id: &str, fact: &str) -> Block {
    let mut steps = Vec::new();
    cx.step(&mut steps, Rule::Distinct, &[eq_id], &[fact], Judgment::Contradiction);
    Block { steps, split: None }
}

/// Continuation run in every open leaf of the lemma with the ids of
/// `t^-12 < Π` and `Π < t^12`.
type Leaf<'a> = dyn Fn(&mut Ctx, &mut Vec<Step>, &str, &str) + 'a;

struct Instance<'a> {
    at: &'a LemmaAtoms,
    lf: &'a LemmaFacts,
    t: Word,
    /// `1 < t`
    pos: String,
    /// `t⁻¹ < a`
    lo: String,
    /// `a < t`
    hi: String,
}

/// Derives `t^-12 < Π < t^12` from `1 < t` and `t⁻¹ < a < t`, then hands
/// each surviving branch to `leaf`.
fn lemma_body(cx: &mut Ctx, mut steps: Vec<Step>, inst: &Instance, leaf: &Leaf) -> Block {
    let Instance { at, lf, t, pos, lo, hi } = inst;
    let (a, c, d) = (&at.a, &at.c, &at.d);
    let (h_ab, h_bc, h_bd) = (lf.commute_ab.as_str(), lf.commute_bc.as_str(), lf.commute_bd.as_str());

    // a^k bounds for k = 1..5.
    let mut pow_lo = vec![String::new(), lo.clone()];
    let mut pow_hi = vec![String::new(), hi.clone()];
    for k in 2..=5i64 {
        let l = cx.step(
            &mut steps,
            Rule::Product { u: a.pow(k - 1), v: a.clone(), t: t.clone(), m: 1 - k, n: -1, bound: Bound::Lower },
            &[&pow_lo[k as usize - 1], lo],
            &[h_ab],
            lt(t.pow(-k), a.pow(k)),
        );
        let h = cx.step(
            &mut steps,
            Rule::Product { u: a.pow(k - 1), v: a.clone(), t: t.clone(), m: k - 1, n: 1, bound: Bound::Upper },
            &[&pow_hi[k as usize - 1], hi],
            &[h_ab],
            lt(a.pow(k), t.pow(k)),
        );
        pow_lo.push(l);
        pow_hi.push(h);
    }

    // c and d lie strictly between t⁻¹ and t.
    let a3 = a.pow(3);
    let mut flip = |u: &Word, conj: &str, comm: &str, steps: &mut Vec<Step>| -> (String, String) {
        let rule = Rule::FlipBound { u: u.clone(), v: a3.clone(), t: t.clone(), n1: -3, n2: 3 };
        let prem = [pow_lo[3].as_str(), pow_hi[3].as_str(), pos.as_str()];
        let facts = [conj, h_ab, comm];
        let l = cx.step(steps, rule.clone(), &prem, &facts, lt(t.inverse(), u.clone()));
        let h = cx.step(steps, rule, &prem, &facts, lt(u.clone(), t.clone()));
        (l, h)
    };
    let (c_lo, c_hi) = flip(c, &lf.conj_c, h_bc, &mut steps);
    let (d_lo, d_hi) = flip(d, &lf.conj_d, h_bd, &mut steps);

    // Windows t^-(k+1) < d a^k < t^(k+1).
    let mut v_lo = vec![d_lo.clone()];
    let mut v_hi = vec![d_hi.clone()];
    for k in 1..=5i64 {
        let v = d.mul(&a.pow(k));
        let l = cx.step(
            &mut steps,
            Rule::Product { u: d.clone(), v: a.pow(k), t: t.clone(), m: -1, n: -k, bound: Bound::Lower },
            &[&d_lo, &pow_lo[k as usize]],
            &[h_bd, h_ab],
            lt(t.pow(-1 - k), v.clone()),
        );
        let h = cx.step(
            &mut steps,
            Rule::Product { u: d.clone(), v: a.pow(k), t: t.clone(), m: 1, n: k, bound: Bound::Upper },
            &[&d_hi, &pow_hi[k as usize]],
            &[h_bd, h_ab],
            lt(v, t.pow(1 + k)),
        );
        v_lo.push(l);
        v_hi.push(h);
    }

    let t_t2 = cx.step(&mut steps, Rule::LeftMultiply { w: t.clone() }, &[pos], &[], lt(t.clone(), t.pow(2)));
    let tm2_tm1 =
        cx.step(&mut steps, Rule::LeftMultiply { w: t.pow(-2) }, &[pos], &[], lt(t.pow(-2), t.pow(-1)));

    let split = cx.split(
        SplitRule::Window { v: c.clone(), t: t.clone(), n1: -1, n2: 1 },
        &[&c_lo, &c_hi],
        window_cases(c, t, -1, 1),
        |cx, i, ids| {
            if i == 1 {
                return close_distinct(cx, &ids[0], &lf.nonid_c);
            }
            let m = if i == 0 { 0 } else { 1 };
            let mut steps = Vec::new();
            let (mut acc_lo, mut acc_hi, mut acc) = (String::new(), String::new(), Word::identity());
            for k in 0..=5i64 {
                let v = d.mul(&a.pow(k));
                let x = c.conj(&v);
                let rule = Rule::ConjugateWindow { u: c.clone(), v: v.clone(), t: t.clone(), m, n1: -1 - k, n2: 1 + k };
                let prem = [ids[0].as_str(), ids[1].as_str(), &v_lo[k as usize], &v_hi[k as usize]];
                let facts: &[&str] = if k == 0 { &[h_bc, h_bd] } else { &[h_bc, h_bd, h_ab] };
                let mut xl = cx.step(&mut steps, rule.clone(), &prem, facts, lt(t.pow(m - 2), x.clone()));
                let mut xh = cx.step(&mut steps, rule, &prem, facts, lt(x.clone(), t.pow(m + 1)));
                if m == 0 {
                    xh = cx.step(&mut steps, Rule::Transitivity, &[&xh, &t_t2], &[], lt(x.clone(), t.pow(2)));
                } else {
                    xl = cx.step(&mut steps, Rule::Transitivity, &[&tm2_tm1, &xl], &[], lt(t.pow(-2), x.clone()));
                }
                if k == 0 {
                    (acc_lo, acc_hi, acc) = (xl, xh, x);
                    continue;
                }
                let next = acc.mul(&x);
                acc_lo = cx.step(
                    &mut steps,
                    Rule::Product { u: acc.clone(), v: x.clone(), t: t.clone(), m: -2 * k, n: -2, bound: Bound::Lower },
                    &[&acc_lo, &xl],
                    &[h_bc, h_bd, h_ab],
                    lt(t.pow(-2 * k - 2), next.clone()),
                );
                acc_hi = cx.step(
                    &mut steps,
                    Rule::Product { u: acc.clone(), v: x.clone(), t: t.clone(), m: 2 * k, n: 2, bound: Bound::Upper },
                    &[&acc_hi, &xh],
                    &[h_bc, h_bd, h_ab],
                    lt(next.clone(), t.pow(2 * k + 2)),
                );
                acc = next;
            }
            debug_assert_eq!(acc, at.product());
            leaf(cx, &mut steps, &acc_lo, &acc_hi);
            Block { steps, split: None }
        },
    );
    Block { steps, split: Some(split) }
}

/// From `1 < s`, derive `t⁻¹ < a` with `R1` on `a⁻¹ < s`, citing the
/// commutation fact between `a` and `b`.
fn invert_upper(cx: &mut Ctx, steps: &mut Vec<Step>, u: &Word, t: &Word, prem: &str, fact: &str) -> String {
    let facts: Vec<&str> = if u.is_identity() { vec![] } else { vec![fact] };
    cx.step(
        steps,
        Rule::Invert { u: u.clone(), t: t.clone(), m: 1, bound: Bound::Upper },
        &[prem],
        &facts,
        lt(t.inverse(), u.inverse()),
    )
}

/// The lemma: `|a| < |b|` implies `|Π| < |b^12|` under the hypotheses
/// recorded in [`lemma_table`].
pub fn script_lemma_gen() -> Derivation {
    let (_, at, lf) = lemma_table();
    let pi = at.product();
    let hyp = Hypothesis { id: "hyp".into(), lhs: at.a.clone(), rhs: at.b.clone() };
    let mut cx = Ctx::default();
    let b = at.b.clone();
    let one = Word::identity();

    let split = cx.split(
        SplitRule::Trichotomy { lhs: b.clone(), rhs: one.clone() },
        &[],
        trichotomy_cases(&b, &one),
        |cx, i, ids| {
            if i == 1 {
                return close_distinct(cx, &ids[0], "H7b");
            }
            let mut steps = Vec::new();
            let (t, pos) = if i == 2 {
                (b.clone(), ids[0].clone())
            } else {
                let p = cx.step(
                    &mut steps,
                    Rule::LeftMultiply { w: b.inverse() },
                    &[&ids[0]],
                    &[],
                    lt(one.clone(), b.inverse()),
                );
                (b.inverse(), p)
            };
            let unpack = Rule::AbsUnpack { hypothesis: "hyp".into() };
            let hi = cx.step(&mut steps, unpack.clone(), &[&pos], &[], lt(at.a.clone(), t.clone()));
            let neg = cx.step(&mut steps, unpack, &[&pos], &[], lt(at.a.inverse(), t.clone()));
            let lo = invert_upper(cx, &mut steps, &at.a.inverse(), &t, &neg, &lf.commute_ab);
            let inst = Instance { at: &at, lf: &lf, t: t.clone(), pos, lo, hi };
            let facts = [lf.commute_ab.clone(), lf.commute_bc.clone(), lf.commute_bd.clone()];
            let finish = |cx: &mut Ctx, steps: &mut Vec<Step>, pi_lo: &str, _pi_hi: &str| {
                let f: Vec<&str> = facts.iter().map(|s| s.as_str()).collect();
                cx.step(
                    steps,
                    Rule::Invert { u: pi.clone(), t: t.clone(), m: -12, bound: Bound::Lower },
                    &[pi_lo],
                    &f,
                    lt(pi.inverse(), t.pow(12)),
                );
            };
            lemma_body(cx, steps, &inst, &finish)
        },
    );
    Derivation {
        name: "lemma_gen".into(),
        goal: Goal::AbsLess { lhs: at.product(), rhs: at.b.pow(12) },
        hypotheses: vec![hyp],
        root: Block { steps: vec![], split: Some(split) },
    }
}

/// Positive representative of an atom's sign class.
struct Signed {
    /// `x` or `x⁻¹`, whichever is positive in this branch.
    pos: Word,
    /// id of `1 < pos`.
    pos_id: String,
    /// id of the raw sign assumption, `1 < x` or `x < 1`.
    sign_id: String,
    negative: bool,
}

/// Splits on the sign of `x`, closing `x = 1` with `nonid`, and continues in
/// the two surviving branches with the positive representative.
fn sign_split(
    cx: &mut Ctx,
    x: &Word,
    nonid: &str,
    mut k: impl FnMut(&mut Ctx, Vec<Step>, Signed) -> Block,
) -> Box<Split> {
    let one = Word::identity();
    cx.split(SplitRule::Trichotomy { lhs: x.clone(), rhs: one.clone() }, &[], trichotomy_cases(x, &one), |cx, i, ids| {
        if i == 1 {
            return close_distinct(cx, &ids[0], nonid);
        }
        let mut steps = Vec::new();
        let s = if i == 2 {
            Signed { pos: x.clone(), pos_id: ids[0].clone(), sign_id: ids[0].clone(), negative: false }
        } else {
            let p = cx.step(&mut steps, Rule::LeftMultiply { w: x.inverse() }, &[&ids[0]], &[], lt(one.clone(), x.inverse()));
            Signed { pos: x.inverse(), pos_id: p, sign_id: ids[0].clone(), negative: true }
        };
        k(cx, steps, s)
    })
}

#[allow(clippy::too_many_arguments)]
/// Runs one lemma instance inside the theorem, where `small` is `|a|`'s
/// positive representative and `big` is `t`, given `small < big`.
fn theorem_case(
    cx: &mut Ctx,
    mut steps: Vec<Step>,
    at: &LemmaAtoms,
    lf: &LemmaFacts,
    identity_fact: &str,
    small: &Signed,
    big: &Signed,
    small_lt_big: &str,
) -> Block {
    let t = big.pos.clone();
    let a = &at.a;
    let one = Word::identity();
    let (lo, hi) = if small.negative {
        // a⁻¹ < t gives t⁻¹ < a; a < 1 < t.
        let lo = invert_upper(cx, &mut steps, &a.inverse(), &t, small_lt_big, &lf.commute_ab);
        let hi = cx.step(&mut steps, Rule::Transitivity, &[&small.sign_id, &big.pos_id], &[], lt(a.clone(), t.clone()));
        (lo, hi)
    } else {
        let tinv = invert_upper(cx, &mut steps, &one, &t, &big.pos_id, &lf.commute_ab);
        let lo = cx.step(&mut steps, Rule::Transitivity, &[&tinv, &small.sign_id], &[], lt(t.inverse(), a.clone()));
        (lo, small_lt_big.to_string())
    };
    let inst = Instance { at, lf, t: t.clone(), pos: big.pos_id.clone(), lo, hi };
    let pos_id = big.pos_id.clone();
    let negative = big.negative;
    let finish = |cx: &mut Ctx, steps: &mut Vec<Step>, pi_lo: &str, pi_hi: &str| {
        // 1 < t^24 by doubling.
        let mut acc = pos_id.clone();
        let mut m = 1;
        let mut by_exp = vec![(1, pos_id.clone())];
        while m < 16 {
            acc = cx.step(
                steps,
                Rule::Product { u: one.clone(), v: one.clone(), t: t.clone(), m, n: m, bound: Bound::Upper },
                &[&acc, &acc],
                &[],
                lt(one.clone(), t.pow(2 * m)),
            );
            m *= 2;
            by_exp.push((m, acc.clone()));
        }
        let p8 = by_exp.iter().find(|(e, _)| *e == 8).map(|(_, id)| id.clone()).unwrap_or_default();
        let p24 = cx.step(
            steps,
            Rule::Product { u: one.clone(), v: one.clone(), t: t.clone(), m: 16, n: 8, bound: Bound::Upper },
            &[&acc, &p8],
            &[],
            lt(one.clone(), t.pow(24)),
        );
        let loop_at = if !negative {
            // Π = t^-36, so t^-12 < t^-36 < t^-12.
            let sub = cx.step(
                steps,
                Rule::Substitute { side: Side::Right, at: 0, reverse: false },
                &[pi_lo],
                &[identity_fact],
                lt(t.pow(-12), t.pow(-36)),
            );
            let back = cx.step(steps, Rule::LeftMultiply { w: t.pow(-36) }, &[&p24], &[], lt(t.pow(-36), t.pow(-12)));
            cx.step(steps, Rule::Transitivity, &[&sub, &back], &[], lt(t.pow(-12), t.pow(-12)))
        } else {
            // Π = t^36, so t^36 < t^12 < t^36.
            let sub = cx.step(
                steps,
                Rule::Substitute { side: Side::Left, at: 0, reverse: false },
                &[pi_hi],
                &[identity_fact],
                lt(t.pow(36), t.pow(12)),
            );
            let fwd = cx.step(steps, Rule::LeftMultiply { w: t.pow(12) }, &[&p24], &[], lt(t.pow(12), t.pow(36)));
            cx.step(steps, Rule::Transitivity, &[&sub, &fwd], &[], lt(t.pow(36), t.pow(36)))
        };
        cx.step(steps, Rule::Absurd, &[&loop_at], &[], Judgment::Contradiction);
    };
    lemma_body(cx, std::mem::take(&mut steps), &inst, &finish)
}

/// No left-order on the group generated by the six plane maps: every branch
/// of the sign and size case analysis ends in a contradiction.
pub fn script_theorem_main() -> Derivation {
    let (p_at, p_lf) = (primary_atoms(), primary_facts());
    let (m_at, m_lf) = (mirrored_atoms(), mirrored_facts());
    let mut cx = Ctx::default();
    let beta = p_at.b.clone();
    let alpha = p_at.a.clone();

    let split = sign_split(&mut cx, &beta, "F7.beta", |cx, steps, bs| {
        let sp = sign_split(cx, &alpha, "F7.alpha", |cx, steps, as_| {
            let (a_pos, b_pos) = (as_.pos.clone(), bs.pos.clone());
            let sp = cx.split(
                SplitRule::Trichotomy { lhs: a_pos.clone(), rhs: b_pos.clone() },
                &[],
                trichotomy_cases(&a_pos, &b_pos),
                |cx, i, ids| match i {
                    0 => theorem_case(cx, vec![], &p_at, &p_lf, "F6", &as_, &bs, &ids[0]),
                    1 => close_distinct(cx, &ids[0], "F8"),
                    _ => theorem_case(cx, vec![], &m_at, &m_lf, "M6", &bs, &as_, &ids[0]),
                },
            );
            Block { steps, split: Some(sp) }
        });
        Block { steps, split: Some(sp) }
    });
    Derivation {
        name: "theorem_main".into(),
        goal: Goal::Contradiction,
        hypotheses: vec![],
        root: Block { steps: vec![], split: Some(split) },
    }
}
