//! Letter-level rewriting oracle for the word problem, independent of the
//! library's normal forms: free reduction plus pinch removal
//! t a^{pk} t⁻¹ → a^{qk} and t⁻¹ a^{qk} t → a^{pk}.

use bsgroupoid::bs::{BSParams, Gen, GroupWord};
use num_traits::ToPrimitive;
use rand::Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tok {
    A(i128),
    T(i8),
}

pub fn tokens(w: &GroupWord) -> Vec<Tok> {
    let mut out = Vec::new();
    for (g, e) in w.runs() {
        let e = e.to_i128().expect("short word");
        match g {
            Gen::A => out.push(Tok::A(e)),
            Gen::T => out.extend(std::iter::repeat_n(Tok::T(e.signum() as i8), e.unsigned_abs() as usize)),
        }
    }
    out
}

fn push(out: &mut Vec<Tok>, tok: Tok) {
    match (out.last().copied(), tok) {
        (_, Tok::A(0)) => {}
        (Some(Tok::A(x)), Tok::A(y)) => {
            out.pop();
            if x + y != 0 {
                out.push(Tok::A(x + y));
            }
        }
        (Some(Tok::T(x)), Tok::T(y)) if x == -y => {
            out.pop();
        }
        _ => out.push(tok),
    }
}

/// Reduces until no pinch is left; by Britton's lemma the result is empty
/// exactly for the identity.
pub fn reduce(w: &GroupWord, params: &BSParams) -> Vec<Tok> {
    let (p, q) = (params.p as i128, params.q as i128);
    let mut out: Vec<Tok> = Vec::new();
    for tok in tokens(w) {
        push(&mut out, tok);
        // a pinch can only close at the end
        loop {
            let n = out.len();
            if n < 3 {
                break;
            }
            let (Tok::T(e1), Tok::A(k), Tok::T(e2)) = (out[n - 3], out[n - 2], out[n - 1]) else { break };
            let replacement = match (e1, e2) {
                (1, -1) if k % p == 0 => k / p * q,
                (-1, 1) if k % q == 0 => k / q * p,
                _ => break,
            };
            out.truncate(n - 3);
            push(&mut out, Tok::A(replacement));
        }
        // t t⁻¹ directly adjacent after a merge
        while out.len() >= 2 {
            let n = out.len();
            match (out[n - 2], out[n - 1]) {
                (Tok::T(x), Tok::T(y)) if x == -y => out.truncate(n - 2),
                _ => break,
            }
        }
    }
    out
}

pub fn oracle_is_identity(w: &GroupWord, params: &BSParams) -> bool {
    reduce(w, params).is_empty()
}

/// A short random word: up to `len` runs, a-exponents in [−4, 4], t-exponents ±1.
pub fn random_word(rng: &mut impl Rng, len: usize) -> GroupWord {
    let n = rng.gen_range(0..=len);
    let mut w = GroupWord::identity();
    for _ in 0..n {
        let piece = if rng.gen_bool(0.5) {
            GroupWord::a_pow(rng.gen_range(-4i64..=4))
        } else {
            GroupWord::t_pow(if rng.gen_bool(0.5) { 1 } else { -1 })
        };
        w = w.mul(&piece);
    }
    w
}

/// t a^p t⁻¹ a^{−q}.
pub fn relator(params: &BSParams) -> GroupWord {
    GroupWord::t()
        .mul(&GroupWord::a_pow(params.p))
        .mul(&GroupWord::t_pow(-1))
        .mul(&GroupWord::a_pow(-params.q))
}

/// u·(conjugates of relators)·v with u⁻¹ inserted so the whole is trivial.
pub fn random_trivial_word(rng: &mut impl Rng, params: &BSParams) -> GroupWord {
    let mut w = GroupWord::identity();
    for _ in 0..rng.gen_range(1..=3) {
        let c = random_word(rng, 3);
        let r = if rng.gen_bool(0.5) { relator(params) } else { relator(params).inverse() };
        w = w.mul(&c.mul(&r).mul(&c.inverse()));
    }
    let u = random_word(rng, 4);
    u.mul(&w).mul(&u.inverse())
}
