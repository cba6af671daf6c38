//! Invariant suite run by `spinquant verify`.
//!
//! Each check reports the worst deviation it saw over a few seeded random
//! inputs together with the tolerance it was held to.

use std::fmt;

use num_complex::Complex64;
use rand::Rng;

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::hilbert::{HilbertParams, StateVector};
use crate::linalg::{commutator, operator_norm, CMatrix};
use crate::operators::{
    rotation_operator, weyl_quantize, FactorizedSymbol, RotationSpec, SpinOperatorSet,
};
use crate::random::{random_density, random_euler, random_rotation, random_state, seeded};
use crate::sphere::{
    averaged_wigner_with, covariance_check, lm_index, Averager, AveragingOptions, LiftBranch,
    MultipoleCoeffs, TomographyMap,
};
use crate::wigner::WignerLattice;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub tolerance: f64,
    pub status: Status,
}

impl Check {
    fn measure(name: &'static str, value: f64, tolerance: f64) -> Self {
        let status = if value <= tolerance {
            Status::Pass
        } else {
            Status::Fail
        };
        Self {
            name,
            value,
            tolerance,
            status,
        }
    }

    fn holds(name: &'static str, ok: bool) -> Self {
        Self {
            name,
            value: if ok { 0.0 } else { 1.0 },
            tolerance: 0.0,
            status: if ok { Status::Pass } else { Status::Fail },
        }
    }

    fn skip(name: &'static str) -> Self {
        Self {
            name,
            value: 0.0,
            tolerance: 0.0,
            status: Status::Skip,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Random inputs per check.
    pub trials: usize,
    /// Whether to run the checks on the averaged Wigner function, which
    /// dominate the run time for large `j`.
    pub sphere: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: 5,
            sphere: true,
        }
    }
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.status != Status::Fail)
}

pub fn run(params: HilbertParams, opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut rng = seeded(opts.seed);
    let trials = opts.trials.max(1);
    let mut checks = Vec::new();
    checks.extend(hilbert_checks(params, trials, &mut rng)?);
    checks.extend(operator_checks(params, trials, &mut rng));
    checks.extend(wigner_checks(params, trials, &mut rng)?);
    if opts.sphere {
        checks.extend(sphere_checks(params, trials, &mut rng)?);
    }
    Ok(checks)
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn hilbert_checks<R: Rng>(p: HilbertParams, trials: usize, rng: &mut R) -> Result<Vec<Check>> {
    let (mut roundtrip, mut parseval) = (0.0f64, 0.0f64);
    for _ in 0..trials {
        let psi = random_state(p, rng);
        let hat = psi.to_momentum();
        roundtrip = roundtrip.max(max_diff(hat.to_position().coeffs(), psi.coeffs()));
        parseval = parseval.max((hat.norm_sqr() - psi.norm_sqr()).abs());
    }
    Ok(vec![
        Check::measure("dft round trip", roundtrip, 1e-12),
        Check::measure("parseval", parseval, 1e-12),
    ])
}

fn operator_checks<R: Rng>(p: HilbertParams, trials: usize, rng: &mut R) -> Vec<Check> {
    let ops = SpinOperatorSet::new(p);
    let mut checks = Vec::new();

    let weyl = |sym: FactorizedSymbol, target: &CMatrix| {
        weyl_quantize(&sym, &p).map(|m| (m - target).iter().map(|z| z.norm()).fold(0.0, f64::max))
    };
    match (
        weyl(FactorizedSymbol::cos_s(p), &ops.jx),
        weyl(FactorizedSymbol::sin_s(p), &ops.jy),
    ) {
        (Ok(x), Ok(y)) => checks.push(Check::measure("weyl x, y", x.max(y), 1e-12)),
        _ => checks.push(Check::skip("weyl x, y")),
    }
    let z = weyl(FactorizedSymbol::height(p), &ops.jz).expect("zero harmonic");
    checks.push(Check::measure("weyl z", z, 1e-12));

    let scale = operator_norm(&ops.jz).max(p.hbar());
    let i_hbar = Complex64::new(0.0, p.hbar());
    let comm = (0..3)
        .map(|a| {
            let (b, c) = ((a + 1) % 3, (a + 2) % 3);
            let lhs = commutator(ops.component(a), ops.component(b));
            operator_norm(&(lhs - ops.component(c) * i_hbar))
        })
        .fold(0.0, f64::max);
    checks.push(Check::measure("commutators", comm / scale, 1e-12));

    let value = ops.casimir_value();
    let n = p.dim();
    let casimir = operator_norm(&(ops.casimir() - CMatrix::identity(n, n) * Complex64::new(value, 0.0)));
    checks.push(Check::measure("casimir", casimir / value.max(p.hbar() * p.hbar()), 1e-11));

    let full_turn = rotation_operator(&RotationSpec::z(std::f64::consts::TAU), &ops);
    let sign = if p.twice_spin().is_multiple_of(2) { 1.0 } else { -1.0 };
    let turn = operator_norm(&(full_turn - CMatrix::identity(n, n) * Complex64::new(sign, 0.0)));
    checks.push(Check::measure("2 pi rotation sign", turn, 1e-12));

    let mut homo = 0.0f64;
    for _ in 0..trials {
        let (a, b) = (random_euler(rng), random_euler(rng));
        let lhs = rotation_operator(&a, &ops) * rotation_operator(&b, &ops);
        let rhs = rotation_operator(&a.compose(&b), &ops);
        let plus = operator_norm(&(&lhs - &rhs));
        let dev = if sign > 0.0 {
            plus
        } else {
            plus.min(operator_norm(&(&lhs + &rhs)))
        };
        homo = homo.max(dev);
    }
    checks.push(Check::measure("homomorphism up to sign", homo, 1e-10));
    checks
}

fn wigner_checks<R: Rng>(p: HilbertParams, trials: usize, rng: &mut R) -> Result<Vec<Check>> {
    let (mut forms, mut imag, mut mass, mut marg, mut odd, mut phi0) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let shifted = p.with_phi0(p.phi0() + 1.1)?;
    for _ in 0..trials {
        let psi = random_state(p, rng);
        let hat = psi.to_momentum();
        let a = WignerLattice::from_position(&psi)?;
        let b = WignerLattice::from_momentum(&hat)?;
        forms = forms.max(
            a.weights()
                .iter()
                .zip(b.weights())
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max),
        );
        imag = imag.max(a.max_imaginary()).max(b.max_imaginary());
        mass = mass.max((a.total_mass() - 1.0).abs());
        let mx = a.marginal_xi().into_iter().zip(psi.probabilities()).map(|(x, y)| (x - y).abs());
        let mp = a.marginal_phi().into_iter().zip(hat.probabilities()).map(|(x, y)| (x - y).abs());
        marg = marg.max(mx.chain(mp).fold(0.0, f64::max));
        odd = a
            .odd_row_sums()
            .iter()
            .chain(&a.odd_column_sums())
            .fold(odd, |acc, v| acc.max(v.abs()));
        let moved = StateVector::new(shifted, psi.coeffs().to_vec())?;
        let c = WignerLattice::from_position(&moved)?;
        phi0 = phi0.max(if c.weights() == a.weights() { 0.0 } else { 1.0 });
    }
    Ok(vec![
        Check::measure("wigner forms agree", forms, 1e-12),
        Check::measure("wigner weights real", imag, 1e-13),
        Check::measure("wigner total mass", mass, 1e-12),
        Check::measure("marginals", marg, 1e-12),
        Check::measure("odd rows and columns", odd, 1e-12),
        Check::measure("weights independent of phi0", phi0, 0.0),
    ])
}

fn sphere_checks<R: Rng>(p: HilbertParams, trials: usize, rng: &mut R) -> Result<Vec<Check>> {
    let two_j = p.twice_spin();
    let opts = AveragingOptions::default();
    let wide = Averager::new(p, &opts.with_lmax(two_j + 2).with_band(two_j + 2));
    let fine = Averager::new(p, &opts.with_band(2 * (two_j + two_j)));
    let map = TomographyMap::new(p);
    let averager = Averager::new(p, &opts);
    let n = p.dim();

    let mut inputs: Vec<DensityMatrix> = Vec::new();
    for _ in 0..trials {
        inputs.push(DensityMatrix::from_state(&random_state(p, rng))?);
        inputs.push(random_density(p, rng));
    }
    inputs.push(DensityMatrix::maximally_mixed(p));

    let (mut band, mut mono, mut real, mut stable, mut round, mut lift) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let expected = MultipoleCoeffs::expected_monopole(&p);
    for rho in &inputs {
        let c = wide.average(rho.matrix());
        band = band.max(c.max_above(two_j));
        mono = mono.max((c.get(0, 0).re - expected).abs()).max(c.get(0, 0).im.abs());
        real = real.max(c.reality_defect());
        let base = averager.average(rho.matrix());
        stable = stable.max(base.max_difference(&fine.average(rho.matrix())));
        let back = map.reconstruct(&base)?;
        round = round.max(operator_norm(&(back.matrix() - rho.matrix())));
        let negated = averaged_wigner_with(rho, &opts.with_lift(LiftBranch::Negated))?;
        lift = lift.max(if negated.as_slice() == base.as_slice() { 0.0 } else { 1.0 });
    }

    let (a, b) = (&inputs[0], &inputs[1]);
    let lambda = rng.random_range(0.0..1.0);
    let mixed = DensityMatrix::mix(&[(lambda, a), (1.0 - lambda, b)])?;
    let ca = averager.average(a.matrix());
    let cb = averager.average(b.matrix());
    let combo: Vec<Complex64> = ca
        .as_slice()
        .iter()
        .zip(cb.as_slice())
        .map(|(x, y)| x * lambda + y * (1.0 - lambda))
        .collect();
    let linear = max_diff(averager.average(mixed.matrix()).as_slice(), &combo);

    let mut cov = 0.0f64;
    for _ in 0..trials {
        cov = cov.max(covariance_check(&random_state(p, rng), &random_rotation(rng))?);
    }

    let mut injected = averager.average(inputs[0].matrix()).as_slice().to_vec();
    injected.resize(crate::sphere::coeff_count(two_j + 1), Complex64::new(0.0, 0.0));
    injected[lm_index(two_j + 1, 0)] = Complex64::new(1e-3, 0.0);
    let injected = MultipoleCoeffs::from_vec(p, two_j + 1, injected)?;
    let rejected = matches!(map.reconstruct(&injected), Err(Error::OutsideImage(_)));

    Ok(vec![
        Check::measure("band limit l <= 2j", band, 1e-9),
        Check::measure("monopole", mono, 1e-10),
        Check::measure("multipole reality", real, 1e-12),
        Check::measure("linearity", linear, 1e-12),
        Check::measure("quadrature stability", stable, 1e-10),
        Check::measure("covariance", cov, 1e-9),
        Check::measure("lift sign cancels", lift, 0.0),
        Check::holds("tomography rank N^2", map.rank() == n * n),
        Check::holds("traceless rank N^2 - 1", map.traceless_rank() == n * n - 1),
        Check::measure("reconstruction round trip", round, 1e-9),
        Check::holds("out-of-image input rejected", rejected),
    ])
}
