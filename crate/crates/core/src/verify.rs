//! Per-instance verification of the structural theorems.
//!
//! Every equivalence is checked by computing each side on its own, through the
//! module that owns that notion, and comparing the booleans. Sides that need the
//! full ideal lattice are reported as skipped when the ring exceeds the
//! enumeration cap.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::action::PartialAction;
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::fn_algebra::InducedAction;
use crate::ideals::{self, TwoSidedIdeal};
use crate::io::Instance;
use crate::linalg::Subspace;
use crate::skew::SkewRing;
use crate::stone::IdempotentPartialAction;
use crate::transformation::{check_cts, SteinbergIso, TransGroupoid};
use crate::ultragraph::Ultragraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Ideal,
    Dynamics,
    Steinberg,
    Stone,
    Ultragraph,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 6] = ["ideal", "dynamics", "steinberg", "stone", "ultragraph", "all"];

    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Ok(match s {
            "ideal" => Suite::Ideal,
            "dynamics" => Suite::Dynamics,
            "steinberg" => Suite::Steinberg,
            "stone" => Suite::Stone,
            "ultragraph" => Suite::Ultragraph,
            "all" => Suite::All,
            _ => return Err(Error::Format(format!("unknown suite `{s}`"))),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = [Suite::Ideal, Suite::Dynamics, Suite::Steinberg, Suite::Stone, Suite::Ultragraph, Suite::All]
            .iter()
            .position(|s| s == self)
            .unwrap();
        f.write_str(Suite::NAMES[i])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub tag: &'static str,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub fingerprint: String,
    pub kind: &'static str,
    pub suite: Suite,
    pub field: u8,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn failures(&self) -> Vec<&CheckResult> {
        self.checks.iter().filter(|c| c.status == Status::Fail).collect()
    }

    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn status_of(&self, tag: &str) -> Option<Status> {
        self.checks.iter().find(|c| c.tag == tag).map(|c| c.status)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub field: PrimeField,
    /// Largest ring dimension for which the full ideal lattice is enumerated.
    pub cap: usize,
    pub max_loop_len: usize,
    /// Random element pairs per instance for the `P₀`/`E` identities.
    pub pairs: usize,
    /// Random triples per instance for associativity and the modular identity.
    pub triples: usize,
    pub seed: u64,
    pub timings: bool,
}

impl VerifyOptions {
    pub fn new(field: PrimeField) -> VerifyOptions {
        VerifyOptions {
            field,
            cap: ideals::cap_for(field.p()),
            max_loop_len: 12,
            pairs: 100,
            triples: 100,
            seed: 0,
            timings: false,
        }
    }
}

enum Outcome {
    Pass,
    Fail(String),
    Skipped(String),
}

type Side<'a> = (&'a str, Option<bool>);

struct Runner {
    timings: bool,
    checks: Vec<CheckResult>,
}

impl Runner {
    fn run(&mut self, tag: &'static str, f: impl FnOnce() -> Result<Outcome>) {
        let start = Instant::now();
        let (status, witness) = match f() {
            Ok(Outcome::Pass) => (Status::Pass, None),
            Ok(Outcome::Fail(w)) => (Status::Fail, Some(w)),
            Ok(Outcome::Skipped(w)) => (Status::Skipped, Some(w)),
            Err(e) => (Status::Fail, Some(format!("error: {e}"))),
        };
        let elapsed_ms = self.timings.then(|| start.elapsed().as_secs_f64() * 1e3);
        self.checks.push(CheckResult { tag, status, witness, elapsed_ms });
    }
}

fn show(sides: &[Side]) -> String {
    sides
        .iter()
        .map(|(n, v)| match v {
            Some(b) => format!("{n}={b}"),
            None => format!("{n}=skipped"),
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn bool_ok(ok: bool, witness: impl FnOnce() -> String) -> Outcome {
    if ok {
        Outcome::Pass
    } else {
        Outcome::Fail(witness())
    }
}

/// Runs `suite` on a validated instance. Failures become report entries.
pub fn run_suite(instance: &Instance, suite: Suite, opts: &VerifyOptions) -> VerificationReport {
    let mut runner = Runner { timings: opts.timings, checks: Vec::new() };
    let fingerprint = instance.fingerprint();
    let seed = opts.seed ^ u64::from_str_radix(&fingerprint[..16], 16).unwrap();
    match instance {
        Instance::Groupoid(_) => runner.run("groupoid-axioms", || Ok(Outcome::Pass)),
        Instance::Action(a) => {
            let ctx = ActionContext::new(a, opts, seed);
            if suite.includes(Suite::Ideal) {
                ctx.ideal_checks(&mut runner);
            }
            if suite.includes(Suite::Dynamics) {
                ctx.dynamics_checks(&mut runner);
            }
            if suite.includes(Suite::Steinberg) {
                ctx.steinberg_checks(&mut runner);
            }
            if suite.includes(Suite::Stone) {
                ctx.stone_checks(&mut runner);
            }
        }
        Instance::Ultragraph(u) => {
            if suite.includes(Suite::Ultragraph) {
                ultragraph_checks(u, opts, &mut runner);
            }
        }
    }
    let mut checks = runner.checks;
    checks.sort_by(|x, y| x.tag.cmp(y.tag));
    VerificationReport { fingerprint, kind: instance.kind(), suite, field: opts.field.p(), checks }
}

fn ultragraph_checks(u: &Ultragraph, opts: &VerifyOptions, runner: &mut Runner) {
    runner.run("condition-k-recurrence", || {
        let r = u.check_kr(opts.max_loop_len);
        if r.consistent {
            return Ok(Outcome::Pass);
        }
        let bad: Vec<String> = r
            .vertices
            .iter()
            .filter(|v| v.shortest_loop.is_some() && v.witness.is_none())
            .map(|v| v.vertex.clone())
            .collect();
        Ok(Outcome::Fail(format!(
            "condition_k={} but all_loops_recurrent={} within length {}; transitory loops at {:?}",
            r.condition_k, r.all_loops_recurrent, r.max_len, bad
        )))
    });
}

struct ActionContext<'a> {
    a: &'a PartialAction,
    opts: &'a VerifyOptions,
    seed: u64,
    ind: InducedAction,
    ring: SkewRing,
    lattice: Option<Vec<TwoSidedIdeal>>,
    lattice_error: Option<String>,
}

impl<'a> ActionContext<'a> {
    fn new(a: &'a PartialAction, opts: &'a VerifyOptions, seed: u64) -> ActionContext<'a> {
        let ind = InducedAction::new(a.clone(), opts.field);
        let ring = SkewRing::from_induced(ind.clone());
        let (lattice, lattice_error) = match ideals::all_ideals(&ring, opts.cap) {
            Ok(l) => (Some(l), None),
            Err(Error::DimensionCap { dim, cap }) => {
                (None, Some(format!("ring dimension {dim} exceeds the enumeration cap {cap}")))
            }
            Err(e) => (None, Some(format!("ideal enumeration failed: {e}"))),
        };
        ActionContext { a, opts, seed, ind, ring, lattice, lattice_error }
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed.wrapping_add(salt.wrapping_mul(0x9e37_79b9_7f4a_7c15)))
    }

    fn skip_reason(&self) -> String {
        self.lattice_error.clone().unwrap_or_default()
    }

    /// All sides that were computed agree; skipped if any side needed the lattice.
    fn agree(&self, sides: &[Side]) -> Outcome {
        let known: Vec<bool> = sides.iter().filter_map(|s| s.1).collect();
        if known.windows(2).any(|w| w[0] != w[1]) {
            Outcome::Fail(show(sides))
        } else if known.len() < sides.len() {
            Outcome::Skipped(self.skip_reason())
        } else {
            Outcome::Pass
        }
    }

    fn implies(&self, p: Side, q: Side) -> Outcome {
        match (p.1, q.1) {
            (Some(true), Some(false)) => Outcome::Fail(show(&[p, q])),
            (Some(false), _) | (_, Some(true)) => Outcome::Pass,
            _ => Outcome::Skipped(self.skip_reason()),
        }
    }

    fn lattice(&self) -> Option<&[TwoSidedIdeal]> {
        self.lattice.as_deref()
    }

    fn graded_from_lattice(&self) -> Option<Vec<TwoSidedIdeal>> {
        self.lattice().map(|l| l.iter().filter(|i| ideals::is_graded_ideal(&self.ring, i)).cloned().collect())
    }

    /// Graded ideals from the lattice when available, else as `Ψ`-images.
    fn graded(&self) -> Vec<TwoSidedIdeal> {
        self.graded_from_lattice().unwrap_or_else(|| ideals::graded_ideals_via_psi(&self.ring))
    }

    fn intersection_property(&self) -> Option<bool> {
        self.lattice().map(|l| ideals::has_intersection_property(&self.ring, l))
    }

    fn residual_intersection_property(&self) -> Result<Option<bool>> {
        self.lattice().map(|_| ideals::has_residual_intersection_property(&self.ring, self.opts.cap)).transpose()
    }

    fn all_graded(&self) -> Option<bool> {
        self.lattice().map(|l| l.iter().all(|i| ideals::is_graded_ideal(&self.ring, i)))
    }

    fn simple(&self) -> Option<bool> {
        self.lattice().map(|l| ideals::is_simple(&self.ring, l))
    }

    fn prime(&self) -> Option<bool> {
        self.lattice().map(|l| ideals::is_prime(&self.ring, l))
    }

    /// `A` is maximal commutative in the quotient of the skew ring by `Ψ(ℐ(U))`.
    fn max_commutative_mod(&self, u: BitSet) -> Result<bool> {
        Ok(ideals::is_a_maximal_commutative(&self.ring.quotient_skew_ring(u)?.quotient))
    }

    /// Closed invariant subsets found by scanning every subset.
    fn invariant_by_scan(&self) -> Vec<BitSet> {
        self.a.all_points().subsets().filter(|&s| self.a.is_invariant(s)).collect()
    }

    fn names(&self, s: BitSet) -> String {
        format!("{:?}", self.a.subset_names(s))
    }

    fn random_vector(&self, rng: &mut ChaCha8Rng, only_a: bool) -> Vec<u8> {
        let p = self.opts.field.p();
        (0..self.ring.dim())
            .map(|i| if only_a && !self.ring.is_unit_monomial(i) { 0 } else { rng.gen_range(0..p) })
            .collect()
    }

    fn ideal_checks(&self, r: &mut Runner) {
        let ring = &self.ring;
        r.run("graded-ideal-correspondence", || {
            for u in self.a.invariant_subsets() {
                let back = ideals::phi(ring, &ideals::psi(ring, u)?)?;
                if back != u {
                    return Ok(Outcome::Fail(format!("Phi(Psi({})) = {}", self.names(u), self.names(back))));
                }
            }
            let Some(graded) = self.graded_from_lattice() else {
                return Ok(Outcome::Skipped(self.skip_reason()));
            };
            for i in &graded {
                let u = ideals::phi(ring, i)?;
                if !self.a.is_invariant(u) || ideals::psi(ring, u)? != *i {
                    return Ok(Outcome::Fail(format!("graded ideal of dimension {} is not Psi(Phi(I))", i.dim())));
                }
            }
            Ok(bool_ok(graded.len() == self.a.invariant_subsets().len(), || {
                format!("{} graded ideals but {} invariant subsets", graded.len(), self.a.invariant_subsets().len())
            }))
        });
        r.run("ideals-graded-equivalences", || {
            let bijective = match self.lattice() {
                None => None,
                Some(l) => {
                    let mut images = l.iter().map(|i| ideals::phi(ring, i)).collect::<Result<Vec<_>>>()?;
                    let n = images.len();
                    images.sort();
                    images.dedup();
                    Some(images.len() == n && images == self.ind.invariant_ideals())
                }
            };
            Ok(self.agree(&[
                ("phi_bijective", bijective),
                ("all_ideals_graded", self.all_graded()),
                ("residual_intersection_property", self.residual_intersection_property()?),
            ]))
        });
        r.run("residual-maximal-commutativity", || {
            let mut max_comm = true;
            for u in self.ind.invariant_ideals() {
                max_comm &= self.max_commutative_mod(u)?;
            }
            Ok(self.agree(&[
                ("maximal_commutative_in_every_quotient", Some(max_comm)),
                ("residual_intersection_property", self.residual_intersection_property()?),
                ("all_ideals_graded", self.all_graded()),
            ]))
        });
        r.run("intersection-property-maximal-commutative", || {
            Ok(self.agree(&[
                ("intersection_property", self.intersection_property()),
                ("a_maximal_commutative", Some(ideals::is_a_maximal_commutative(ring))),
            ]))
        });
        r.run("prime-implies-g-prime", || {
            Ok(self.implies(("prime", self.prime()), ("g_prime", Some(self.ind.is_g_prime()))))
        });
        r.run("prime-under-intersection-property", || {
            Ok(match self.intersection_property() {
                Some(false) => Outcome::Pass,
                Some(true) => self.agree(&[("g_prime", Some(self.ind.is_g_prime())), ("prime", self.prime())]),
                None => Outcome::Skipped(self.skip_reason()),
            })
        });
        r.run("simple-iff-g-simple-and-intersection-property", || {
            let rhs = self.intersection_property().map(|ip| ip && self.ind.is_g_simple());
            Ok(self.agree(&[("simple", self.simple()), ("g_simple_and_intersection_property", rhs)]))
        });
        r.run("graded-simple-iff-g-simple", || {
            Ok(self.agree(&[
                ("graded_simple", Some(ideals::is_graded_simple(ring, &self.graded()))),
                ("g_simple", Some(self.ind.is_g_simple())),
            ]))
        });
        r.run("graded-prime-iff-g-prime", || {
            Ok(self.agree(&[
                ("graded_prime", Some(ideals::is_graded_prime(ring, &self.graded()))),
                ("g_prime", Some(self.ind.is_g_prime())),
            ]))
        });
        r.run("ideal-within-psi-of-p0", || {
            let Some(l) = self.lattice() else { return Ok(Outcome::Skipped(self.skip_reason())) };
            let n = self.a.num_points();
            for i in l {
                let j = Subspace::span(
                    self.opts.field,
                    n,
                    i.space().rows().iter().map(|v| ideals::p0_vec(ring, v).values().to_vec()),
                );
                let u = self.ind.support_of_ideal(&j)?;
                if !self.a.is_invariant(u) || !i.is_subset_of(&ideals::psi(ring, u)?) {
                    return Ok(Outcome::Fail(format!("ideal of dimension {} with P0-support {}", i.dim(), self.names(u))));
                }
            }
            Ok(Outcome::Pass)
        });
        r.run("invariant-part-generates", || {
            let Some(l) = self.lattice() else { return Ok(Outcome::Skipped(self.skip_reason())) };
            for i in l {
                let i0 = ideals::intersect_a(ring, i);
                let generated = ideals::ideal_generated_by(ring, i0.rows());
                let j0 = ideals::phi(ring, i)?;
                if generated != ideals::psi(ring, j0)? {
                    return Ok(Outcome::Fail(format!("S I0 S differs from J0 x G for J0 on {}", self.names(j0))));
                }
            }
            Ok(Outcome::Pass)
        });
        r.run("unit-components", || {
            let Some(l) = self.lattice() else { return Ok(Outcome::Skipped(self.skip_reason())) };
            let gd = self.a.groupoid();
            for i in l {
                for row in ideals::intersect_a(ring, i).rows() {
                    for e in gd.units() {
                        let part: Vec<u8> = (0..ring.dim())
                            .map(|k| if ring.basis()[k].0 == e { row[k] } else { 0 })
                            .collect();
                        if !i.contains(&part) {
                            return Ok(Outcome::Fail(format!(
                                "component at {} of an element of I ∩ A is not in I",
                                gd.morphisms()[e]
                            )));
                        }
                    }
                }
            }
            Ok(Outcome::Pass)
        });
        r.run("p0-multiplicative-against-a", || {
            let mut rng = self.rng(1);
            for _ in 0..self.opts.pairs {
                let a = self.random_vector(&mut rng, true);
                let b = self.random_vector(&mut rng, false);
                let (pa, pb) = (ideals::p0_vec(ring, &a), ideals::p0_vec(ring, &b));
                if ideals::p0_vec(ring, &ring.mul_vec(&a, &b)) != pa.mul(&pb)?
                    || ideals::p0_vec(ring, &ring.mul_vec(&b, &a)) != pb.mul(&pa)?
                {
                    return Ok(Outcome::Fail(format!("a = {a:?}, b = {b:?}")));
                }
            }
            Ok(Outcome::Pass)
        });
        r.run("e-bimodule", || {
            let mut rng = self.rng(2);
            let e = |v: &[u8]| ring.to_vector(&ring.e_map(&ring.from_vector(v)));
            for _ in 0..self.opts.pairs {
                let a = self.random_vector(&mut rng, true);
                let b = self.random_vector(&mut rng, false);
                if e(&ring.mul_vec(&a, &b)) != ring.mul_vec(&a, &e(&b))
                    || e(&ring.mul_vec(&b, &a)) != ring.mul_vec(&e(&b), &a)
                {
                    return Ok(Outcome::Fail(format!("a = {a:?}, b = {b:?}")));
                }
            }
            Ok(Outcome::Pass)
        });
        r.run("local-units-modular-identity", || {
            let mut rng = self.rng(3);
            let invariant = self.a.invariant_subsets();
            for _ in 0..self.opts.triples {
                let i = ideals::ideal_generated_by(ring, &[self.random_vector(&mut rng, false)]);
                let j = ideals::ideal_generated_by(ring, &[self.random_vector(&mut rng, false)]);
                let u = invariant[rng.gen_range(0..invariant.len())];
                let k = ideals::psi(ring, u)?;
                let lhs = i.sum(&j).intersection(&k.sum(&j));
                let rhs = i.intersection(&k).sum(&j);
                if lhs != rhs {
                    return Ok(Outcome::Fail(format!(
                        "dims I={}, J={}, K={} (on {}): {} vs {}",
                        i.dim(),
                        j.dim(),
                        k.dim(),
                        self.names(u),
                        lhs.dim(),
                        rhs.dim()
                    )));
                }
            }
            Ok(Outcome::Pass)
        });
    }

    fn dynamics_checks(&self, r: &mut Runner) {
        let a = self.a;
        let ring = &self.ring;
        let t = TransGroupoid::build(a);
        r.run("minimal-iff-g-simple", || {
            Ok(self.agree(&[("minimal", Some(a.is_minimal())), ("g_simple", Some(self.ind.is_g_simple()))]))
        });
        r.run("transitive-iff-g-prime", || {
            Ok(self.agree(&[
                ("topologically_transitive", Some(a.is_topologically_transitive())),
                ("g_prime", Some(self.ind.is_g_prime())),
            ]))
        });
        r.run("free-on-invariant-iff-maximal-commutative", || {
            let all = a.all_points();
            for f in self.invariant_by_scan() {
                let free = a.is_topologically_free_on(f)?;
                let max_comm = self.max_commutative_mod(all.difference(f))?;
                if free != max_comm {
                    return Ok(Outcome::Fail(format!(
                        "F = {}: topologically_free_on={free}, maximal_commutative={max_comm}",
                        self.names(f)
                    )));
                }
            }
            Ok(Outcome::Pass)
        });
        r.run("strongly-effective-equivalences", || {
            let t = t.as_ref().map_err(Clone::clone)?;
            let all = a.all_points();
            let closed = self.invariant_by_scan();
            let mut free_closed = true;
            let mut max_comm = true;
            for &f in &closed {
                free_closed &= a.is_topologically_free_on(f)?;
                max_comm &= self.max_commutative_mod(all.difference(f))?;
            }
            // Open invariant sets are complements of closed ones.
            let mut free_open = true;
            for &f in &closed {
                free_open &= a.is_topologically_free_on(all.difference(f))?;
            }
            Ok(self.agree(&[
                ("free_on_open_invariant", Some(free_open)),
                ("free_on_closed_invariant", Some(free_closed)),
                ("maximal_commutative_in_quotients", Some(max_comm)),
                ("residual_intersection_property", self.residual_intersection_property()?),
                ("all_ideals_graded", self.all_graded()),
                ("strongly_effective", Some(t.is_strongly_effective())),
            ]))
        });
        r.run("effective-equivalences", || {
            let t = t.as_ref().map_err(Clone::clone)?;
            Ok(self.agree(&[
                ("topologically_free", Some(a.is_topologically_free())),
                ("a_maximal_commutative", Some(ideals::is_a_maximal_commutative(ring))),
                ("intersection_property", self.intersection_property()),
                ("effective", Some(t.is_effective())),
            ]))
        });
        r.run("graded-simplicity-and-primeness-dynamics", || {
            let graded = self.graded();
            let simple = self.agree(&[
                ("graded_simple", Some(ideals::is_graded_simple(ring, &graded))),
                ("minimal", Some(a.is_minimal())),
            ]);
            if let Outcome::Fail(w) = simple {
                return Ok(Outcome::Fail(w));
            }
            Ok(self.agree(&[
                ("graded_prime", Some(ideals::is_graded_prime(ring, &graded))),
                ("topologically_transitive", Some(a.is_topologically_transitive())),
            ]))
        });
        r.run("simplicity-and-primeness-dynamics", || {
            let (free, trans, minimal) = (a.is_topologically_free(), a.is_topologically_transitive(), a.is_minimal());
            let parts = [
                self.implies(("prime", self.prime()), ("topologically_transitive", Some(trans))),
                self.implies(("free_and_transitive", Some(free && trans)), ("prime", self.prime())),
                self.agree(&[("minimal_and_free", Some(minimal && free)), ("simple", self.simple())]),
            ];
            let mut skipped = None;
            for p in parts {
                match p {
                    Outcome::Fail(w) => return Ok(Outcome::Fail(w)),
                    Outcome::Skipped(w) => skipped = Some(w),
                    Outcome::Pass => {}
                }
            }
            Ok(skipped.map_or(Outcome::Pass, Outcome::Skipped))
        });
        r.run("groupoid-dynamics-correspond", || {
            let rep = check_cts(a)?;
            Ok(bool_ok(rep.all_pass(), || {
                rep.failures()
                    .iter()
                    .map(|c| format!("{}: action={}, groupoid={}", c.name, c.action_side, c.groupoid_side))
                    .collect::<Vec<_>>()
                    .join("; ")
            }))
        });
        r.run("free-iff-effective", || {
            let t = t.as_ref().map_err(Clone::clone)?;
            Ok(self.agree(&[("topologically_free", Some(a.is_topologically_free())), ("effective", Some(t.is_effective()))]))
        });
        r.run("residually-free-iff-strongly-effective", || {
            let t = t.as_ref().map_err(Clone::clone)?;
            Ok(self.agree(&[
                ("residually_topologically_free", Some(a.is_residually_topologically_free())),
                ("strongly_effective", Some(t.is_strongly_effective())),
            ]))
        });
    }

    fn steinberg_checks(&self, r: &mut Runner) {
        let ring = &self.ring;
        let t = TransGroupoid::build(self.a);
        r.run("steinberg-isomorphism", || {
            let t = t.as_ref().map_err(Clone::clone)?;
            let rep = SteinbergIso::new(ring, t)?.check(ring, t);
            Ok(bool_ok(rep.passed(), || {
                format!(
                    "bijective={}, multiplicative={}, unit_preserving={}, witness={}",
                    rep.bijective,
                    rep.multiplicative,
                    rep.unit_preserving,
                    rep.witness.clone().unwrap_or_default()
                )
            }))
        });
        r.run("convolution-associativity", || {
            let t = t.as_ref().map_err(Clone::clone)?;
            let k = self.opts.field;
            let mut rng = self.rng(4);
            let n = t.num_arrows();
            let unit = t.unit_indicator();
            for _ in 0..self.opts.triples {
                let f: Vec<Vec<u8>> = (0..3).map(|_| (0..n).map(|_| rng.gen_range(0..k.p())).collect()).collect();
                let left = t.convolve(k, &t.convolve(k, &f[0], &f[1])?, &f[2])?;
                let right = t.convolve(k, &f[0], &t.convolve(k, &f[1], &f[2])?)?;
                if left != right {
                    return Ok(Outcome::Fail(format!("f1={:?}, f2={:?}, f3={:?}", f[0], f[1], f[2])));
                }
                if t.convolve(k, &unit, &f[0])? != f[0] || t.convolve(k, &f[0], &unit)? != f[0] {
                    return Ok(Outcome::Fail(format!("unit indicator does not absorb {:?}", f[0])));
                }
            }
            Ok(Outcome::Pass)
        });
    }

    fn stone_checks(&self, r: &mut Runner) {
        let tau = IdempotentPartialAction::from_induced(&self.ind);
        let theta = tau.induced_theta();
        r.run("stone-round-trip", || {
            let theta = theta.as_ref().map_err(Clone::clone)?;
            Ok(bool_ok(theta == self.a, || "induced action on ultrafilters differs from the original".into()))
        });
        r.run("stone-filter-correspondence", || {
            Ok(bool_ok(tau.check_zeta()?, || "zeta_g and its inverse do not compose to the identity".into()))
        });
        r.run("stone-equivariance", || {
            let theta = theta.as_ref().map_err(Clone::clone)?;
            let rep = tau.check_equivariance(theta)?;
            Ok(bool_ok(rep.passed(), || rep.failures.join("; ")))
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn report(a: PartialAction) -> VerificationReport {
        run_suite(&Instance::Action(a), Suite::All, &VerifyOptions::new(PrimeField::f2()))
    }

    #[test]
    fn fixtures_pass() {
        for a in [fixtures::fix_a(), fixtures::fix_b(), fixtures::fix_c(), fixtures::fix_d()] {
            let r = report(a);
            assert!(r.passed(), "{:?}", r.failures());
            assert_eq!(r.count(Status::Skipped), 0);
        }
    }

    #[test]
    fn tags_unique_and_sorted() {
        let r = report(fixtures::fix_c());
        let tags: Vec<&str> = r.checks.iter().map(|c| c.tag).collect();
        let mut sorted = tags.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(tags, sorted);
    }

    #[test]
    fn capped_checks_are_skipped() {
        let mut opts = VerifyOptions::new(PrimeField::f2());
        opts.cap = 2;
        let r = run_suite(&Instance::Action(fixtures::fix_c()), Suite::Ideal, &opts);
        assert!(r.passed());
        assert_eq!(r.status_of("intersection-property-maximal-commutative"), Some(Status::Skipped));
        assert_eq!(r.status_of("graded-simple-iff-g-simple"), Some(Status::Pass));
    }

    #[test]
    fn ultragraph_suite() {
        let opts = VerifyOptions::new(PrimeField::f2());
        for u in [fixtures::fix_u1(), fixtures::fix_u2(), fixtures::fix_u3()] {
            let r = run_suite(&Instance::Ultragraph(u), Suite::All, &opts);
            assert_eq!(r.checks.len(), 1);
            assert!(r.passed());
        }
    }

    #[test]
    fn deterministic() {
        let a = report(fixtures::fix_d());
        let b = report(fixtures::fix_d());
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn suite_names_parse() {
        for n in Suite::NAMES {
            assert_eq!(n.parse::<Suite>().unwrap().to_string(), n);
        }
        assert!("nope".parse::<Suite>().is_err());
    }
}
