//! Exact feasibility of small systems of linear inequalities over Q via
//! Fourier-Motzkin elimination. Systems here come from fan validation
//! (separating hyperplanes) and rational cone membership, so they stay tiny.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// One inequality: sum(coeffs[i]*y[i]) + constant (>0 if strict, >=0 otherwise).
#[derive(Clone, Debug)]
pub struct Ineq {
    pub coeffs: Vec<BigRational>,
    pub constant: BigRational,
    pub strict: bool,
}

impl Ineq {
    pub fn ge(coeffs: Vec<BigRational>, constant: BigRational) -> Self {
        Ineq { coeffs, constant, strict: false }
    }

    pub fn gt(coeffs: Vec<BigRational>, constant: BigRational) -> Self {
        Ineq { coeffs, constant, strict: true }
    }

    fn constant_violated(&self) -> bool {
        if self.strict {
            !self.constant.is_positive()
        } else {
            self.constant.is_negative()
        }
    }
}

/// Decide whether the system has a rational solution.
pub fn feasible(mut system: Vec<Ineq>, nvars: usize) -> bool {
    for var in (0..nvars).rev() {
        let mut pos: Vec<Ineq> = Vec::new();
        let mut neg: Vec<Ineq> = Vec::new();
        let mut rest: Vec<Ineq> = Vec::new();
        for row in system {
            let c = &row.coeffs[var];
            if c.is_positive() {
                pos.push(row);
            } else if c.is_negative() {
                neg.push(row);
            } else {
                rest.push(row);
            }
        }
        for p in &pos {
            for n in &neg {
                // eliminate `var` by the positive combination (-n_v)*p + p_v*n
                let a = -n.coeffs[var].clone();
                let b = p.coeffs[var].clone();
                let coeffs: Vec<BigRational> = (0..var)
                    .map(|i| &a * &p.coeffs[i] + &b * &n.coeffs[i])
                    .collect();
                let constant = &a * &p.constant + &b * &n.constant;
                let row = Ineq { coeffs, constant, strict: p.strict || n.strict };
                if row.coeffs.iter().all(|x| x.is_zero()) {
                    if row.constant_violated() {
                        return false;
                    }
                } else {
                    rest.push(row);
                }
            }
        }
        for row in &mut rest {
            row.coeffs.truncate(var);
        }
        // rows that lost all their support become pure constants
        let mut next = Vec::new();
        for row in rest {
            if row.coeffs.iter().all(|x| x.is_zero()) {
                if row.constant_violated() {
                    return false;
                }
            } else {
                next.push(row);
            }
        }
        system = next;
    }
    system.iter().all(|row| !row.constant_violated())
}

/// Eliminate the first `count` variables, returning an equivalent system over
/// the remaining ones (the exact projection of the solution set). Rows that
/// become tautologies are dropped; an infeasible constant row is returned
/// as-is so feasibility checks still see it.
pub fn project_out(mut system: Vec<Ineq>, nvars: usize, count: usize) -> Vec<Ineq> {
    for var in (0..count).rev() {
        let mut pos: Vec<Ineq> = Vec::new();
        let mut neg: Vec<Ineq> = Vec::new();
        let mut rest: Vec<Ineq> = Vec::new();
        for row in system {
            let c = &row.coeffs[var];
            if c.is_positive() {
                pos.push(row);
            } else if c.is_negative() {
                neg.push(row);
            } else {
                rest.push(row);
            }
        }
        for p in &pos {
            for n in &neg {
                let a = -n.coeffs[var].clone();
                let b = p.coeffs[var].clone();
                let mut coeffs: Vec<BigRational> = (0..nvars)
                    .map(|i| &a * &p.coeffs[i] + &b * &n.coeffs[i])
                    .collect();
                coeffs[var] = BigRational::zero();
                let constant = &a * &p.constant + &b * &n.constant;
                rest.push(Ineq { coeffs, constant, strict: p.strict || n.strict });
            }
        }
        // drop tautological rows and duplicates, keep one infeasibility witness
        let mut seen = std::collections::BTreeSet::new();
        let mut next = Vec::new();
        for row in rest {
            if row.coeffs.iter().all(|x| x.is_zero()) {
                if row.constant_violated() {
                    return vec![row];
                }
            } else if seen.insert(normalize_key(&row)) {
                next.push(row);
            }
        }
        system = next;
    }
    system
}

/// Canonical integer form of a row under positive rescaling, for dedup.
fn normalize_key(row: &Ineq) -> (Vec<num_bigint::BigInt>, num_bigint::BigInt, bool) {
    use num_integer::Integer;
    let mut lcm = num_bigint::BigInt::from(1);
    for c in row.coeffs.iter().chain(std::iter::once(&row.constant)) {
        lcm = lcm.lcm(c.denom());
    }
    let scale = BigRational::from_integer(lcm);
    let mut ints: Vec<num_bigint::BigInt> =
        row.coeffs.iter().map(|c| (c * &scale).to_integer()).collect();
    let mut constant = (&row.constant * &scale).to_integer();
    let mut g = num_bigint::BigInt::from(0);
    for x in ints.iter().chain(std::iter::once(&constant)) {
        g = g.gcd(x);
    }
    if g > num_bigint::BigInt::from(1) {
        for x in ints.iter_mut() {
            *x /= &g;
        }
        constant /= &g;
    }
    (ints, constant, row.strict)
}
