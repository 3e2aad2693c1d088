use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use algdyn::counterexamples::{
    padic_times_p_demo, periodic_densify, shift_embed_demo, sigma_injectivity_exhaustive_with,
    sigma_nonsurjectivity_witness,
};
use algdyn::equivariant::{
    dual_injective, dual_surjective, image_chain_stabilization, surjunctivity_experiment_with, AffineMapSpec,
    EndoOnFinitelyGenerated, OverallVerdict, PeriodicTorusPoint,
};
use algdyn::group_ring::{mul, parse_poly};
use algdyn::principal::{
    expansivity_certificate_with, fixed_point_sweep, mixing_certificate, Expansivity, ExpansivityWitness, MixingVerdict,
};
use algdyn::zlattice::{parse_matrix, smith_normal_form};
use algdyn::{Execution, Lattice, LaurentPoly, PrincipalSystem};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::args::{Command, Demo};
use crate::report::Record;

/// Input or precondition failure, reported with the owning error type.
#[derive(Debug)]
pub struct InputError {
    name: String,
    message: String,
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.name, self.message)
    }
}

fn input<E: fmt::Debug + fmt::Display>(e: E) -> InputError {
    let ty = std::any::type_name::<E>().rsplit("::").next().unwrap_or("Error");
    let debug = format!("{e:?}");
    let variant: String = debug.chars().take_while(|c| c.is_alphanumeric() || *c == '_').collect();
    InputError { name: format!("{ty}::{variant}"), message: e.to_string() }
}

fn usage(message: impl Into<String>) -> InputError {
    InputError { name: "Usage".into(), message: message.into() }
}

pub struct Outcome {
    pub records: Vec<Record>,
    /// The command reached a negative verdict.
    pub negative: bool,
}

impl Outcome {
    fn ok(records: Vec<Record>) -> Self {
        Outcome { records, negative: false }
    }
}

pub fn run(command: &Command, exec: Execution) -> Result<Outcome, InputError> {
    match command {
        Command::Mul { f, g, dim } => run_mul(f, g, *dim),
        Command::Snf { matrix } => run_snf(matrix),
        Command::Fixedpoints { f, lattice, lattices, dim } => {
            run_fixedpoints(f, lattice, lattices.as_deref(), *dim, exec)
        }
        Command::Certify { f, grid, dim } => run_certify(f, *grid, *dim, exec),
        Command::Surjunctivity { f, a, b, lattice, lattices, dim } => {
            run_surjunctivity(f, a, b.as_deref(), lattice, lattices.as_deref(), *dim, exec)
        }
        Command::Dcc { group, matrix } => run_dcc(group, matrix),
        Command::Sigma { width } => run_sigma(*width, exec),
        Command::Densify { window, n, dim, default } => run_densify(window, *n, *dim, *default),
        Command::Demo { which } => run_demo(which),
    }
}

/// Parses polynomials in a common dimension: `dim` if given, else the
/// largest inferred from the texts.
fn parse_polys(texts: &[&str], dim: Option<usize>) -> Result<Vec<LaurentPoly>, InputError> {
    let dim = match dim {
        Some(d) => d,
        None => texts
            .iter()
            .map(|t| parse_poly(t, None).map(|p| p.dim()))
            .try_fold(1, |acc, d| d.map(|d| acc.max(d)))
            .map_err(input)?,
    };
    texts.iter().map(|t| parse_poly(t, Some(dim)).map_err(input)).collect()
}

fn parse_lattice_family(spec: &str, dim: usize) -> Result<Vec<Lattice>, InputError> {
    if let Some(rest) = spec.strip_prefix("diag:") {
        let k: i64 =
            rest.trim().trim_start_matches("N<=").parse().map_err(|_| usage(format!("bad family `{spec}`")))?;
        if k < 1 {
            return Err(usage("diag family needs K >= 1"));
        }
        return (1..=k).map(|n| Lattice::scaled(n, dim).map_err(input)).collect();
    }
    if let Some(rest) = spec.strip_prefix("random:") {
        let (count, seed) = rest.split_once(',').ok_or_else(|| usage(format!("bad family `{spec}`")))?;
        let count: usize = count.trim().parse().map_err(|_| usage(format!("bad count in `{spec}`")))?;
        let seed: u64 = seed.trim().parse().map_err(|_| usage(format!("bad seed in `{spec}`")))?;
        return Ok(random_lattices(count, seed, dim));
    }
    Err(usage(format!("unknown lattice family `{spec}`")))
}

/// Seeded upper-triangular bases in Hermite form: diagonal in `1..=4`,
/// entries right of the diagonal reduced modulo the diagonal of their
/// column.
fn random_lattices(count: usize, seed: u64, dim: usize) -> Vec<Lattice> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let diag: Vec<i64> = (0..dim).map(|_| rng.random_range(1..=4)).collect();
            let rows: Vec<Vec<i64>> = (0..dim)
                .map(|i| {
                    (0..dim)
                        .map(|j| match j.cmp(&i) {
                            std::cmp::Ordering::Less => 0,
                            std::cmp::Ordering::Equal => diag[i],
                            std::cmp::Ordering::Greater => rng.random_range(0..diag[j]),
                        })
                        .collect()
                })
                .collect();
            Lattice::new(algdyn::IntMatrix::from_rows(&rows).expect("square")).expect("nonsingular")
        })
        .collect()
}

/// Explicit lattices and/or a family. The dimension comes from the explicit
/// lattices, then `dim`, then the polynomial texts.
fn collect_lattices(
    explicit: &[String],
    family: Option<&str>,
    dim: Option<usize>,
    polys: &[&str],
) -> Result<(usize, Vec<Lattice>), InputError> {
    let mut lattices: Vec<Lattice> =
        explicit.iter().map(|t| Lattice::parse(t).map_err(input)).collect::<Result<_, _>>()?;
    let dim = match (lattices.first(), dim) {
        (Some(l), _) => l.dim(),
        (None, Some(d)) => d,
        (None, None) => parse_polys(polys, None)?[0].dim(),
    };
    if let Some(bad) = lattices.iter().find(|l| l.dim() != dim) {
        return Err(usage(format!("lattice {bad} has dimension {}, expected {dim}", bad.dim())));
    }
    if let Some(spec) = family {
        lattices.extend(parse_lattice_family(spec, dim)?);
    }
    if lattices.is_empty() {
        return Err(usage("give --lattice or --lattices"));
    }
    Ok((dim, lattices))
}

fn run_mul(f: &str, g: &str, dim: Option<usize>) -> Result<Outcome, InputError> {
    let p = parse_polys(&[f, g], dim)?;
    let product = mul(&p[0], &p[1]).map_err(input)?;
    Ok(Outcome::ok(vec![Record::new("mul").field("product", product.to_string())]))
}

fn run_snf(matrix: &str) -> Result<Outcome, InputError> {
    let m = parse_matrix(matrix).map_err(input)?;
    let snf = smith_normal_form(&m);
    Ok(Outcome::ok(vec![Record::new("snf").field("invariants", snf.diagonal())]))
}

fn run_fixedpoints(
    f: &str,
    explicit: &[String],
    family: Option<&str>,
    dim: Option<usize>,
    exec: Execution,
) -> Result<Outcome, InputError> {
    let (dim, lattices) = collect_lattices(explicit, family, dim, &[f])?;
    let f = parse_polys(&[f], Some(dim))?.remove(0);
    let sys = PrincipalSystem::new(f.clone());
    let structures = fixed_point_sweep(&sys, &lattices, exec).map_err(input)?;
    let records = lattices
        .iter()
        .zip(structures)
        .map(|(l, s)| {
            Record::new("fixedpoints")
                .field("f", f.to_string())
                .field("lattice", l.to_string())
                .field("torus_rank", s.torus_rank)
                .field("torsion", s.torsion.invariant_factors().to_vec())
        })
        .collect();
    Ok(Outcome::ok(records))
}

fn run_certify(f: &str, grid: u32, dim: Option<usize>, exec: Execution) -> Result<Outcome, InputError> {
    let f = parse_polys(&[f], dim)?.remove(0);
    let mut r = Record::new("certify").field("f", f.to_string());
    r = match expansivity_certificate_with(&f, grid, exec) {
        Expansivity::Expansive(ExpansivityWitness::Lopsided(e)) => {
            r.field("expansivity", "Expansive").field("witness", "lopsided").field("exponent", ints(&e))
        }
        Expansivity::Expansive(ExpansivityWitness::GridNonvanishing { grid_exponent, min_value, threshold }) => r
            .field("expansivity", "Expansive")
            .field("witness", "grid")
            .field("grid_exponent", grid_exponent as usize)
            .field("min_value", format!("{min_value:.9}"))
            .field("threshold", format!("{threshold:.9}")),
        Expansivity::Unknown => r.field("expansivity", "Unknown"),
    };
    let mixing = match mixing_certificate(&f) {
        MixingVerdict::Mixing => "Mixing",
        MixingVerdict::Unknown => "Unknown",
    };
    Ok(Outcome::ok(vec![r.field("mixing", mixing)]))
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn run_surjunctivity(
    f: &str,
    a: &str,
    b: Option<&str>,
    explicit: &[String],
    family: Option<&str>,
    dim: Option<usize>,
    exec: Execution,
) -> Result<Outcome, InputError> {
    let (dim, lattices) = collect_lattices(explicit, family, dim, &[f, a])?;
    let p = parse_polys(&[f, a], Some(dim))?;
    let (f, a) = (&p[0], &p[1]);
    let mut spec = AffineMapSpec::linear(a.clone());
    if let Some(b) = b {
        let value = BigRational::from_str(b.trim()).map_err(|_| usage(format!("bad rational `{b}`")))?;
        spec.b = PeriodicTorusPoint::constant(dim, value);
    }
    let report = surjunctivity_experiment_with(&spec, f, &lattices, exec).map_err(input)?;
    let mut records: Vec<Record> = report
        .strata
        .iter()
        .map(|s| {
            Record::new("stratum")
                .field("lattice", s.lattice.to_string())
                .field("injective", s.injective)
                .field("surjective", s.surjective)
        })
        .collect();
    let (verdict, negative) = match &report.overall {
        OverallVerdict::Consistent => ("Consistent", false),
        OverallVerdict::CounterexampleFound(_) => ("Counterexample", true),
    };
    records.push(
        Record::new("surjunctivity")
            .field("f", f.to_string())
            .field("a", a.to_string())
            .field("strata", report.strata.len())
            .field("verdict", verdict),
    );
    Ok(Outcome { records, negative })
}

fn parse_group(text: &str) -> Result<Vec<BigInt>, InputError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(|t| BigInt::from_str(t.trim()).map_err(|_| usage(format!("bad cyclic order `{t}`")))).collect()
}

fn run_dcc(group: &str, matrix: &str) -> Result<Outcome, InputError> {
    let group = parse_group(group)?;
    let m = parse_matrix(matrix).map_err(input)?;
    let e = EndoOnFinitelyGenerated::new(group.clone(), m).map_err(input)?;
    let chain = image_chain_stabilization(&e);
    let r = Record::new("dcc")
        .field("group", group)
        .field("steps", chain.steps as usize)
        .field("stable_image_rank", chain.stable_image_rank)
        .field("stable_image_torsion", chain.stable_image_torsion.invariant_factors().to_vec())
        .field("dual_injective", dual_injective(&e))
        .field("dual_surjective", dual_surjective(&e));
    Ok(Outcome::ok(vec![r]))
}

fn run_sigma(width: usize, exec: Execution) -> Result<Outcome, InputError> {
    let injective = sigma_injectivity_exhaustive_with(width, exec).map_err(input)?;
    let mut r = Record::new("sigma").field("width", width).field("injective", injective);
    if width >= 2 {
        let w = sigma_nonsurjectivity_witness(width).map_err(input)?;
        r = r.field("witness_nonsurjective", w.to_string());
    }
    Ok(Outcome { records: vec![r], negative: !injective })
}

fn parse_window(text: &str, dim: usize) -> Result<BTreeMap<Vec<i64>, i64>, InputError> {
    let mut cells = BTreeMap::new();
    for cell in text.split(';').map(str::trim).filter(|c| !c.is_empty()) {
        let bad = || usage(format!("bad window cell `{cell}`"));
        let (pos, sym) = cell.split_once('=').ok_or_else(bad)?;
        let pos: Vec<i64> = pos.split(',').map(|x| x.trim().parse()).collect::<Result<_, _>>().map_err(|_| bad())?;
        if pos.len() != dim {
            return Err(usage(format!("cell `{cell}` is not {dim}-dimensional")));
        }
        cells.insert(pos, sym.trim().parse().map_err(|_| bad())?);
    }
    Ok(cells)
}

fn run_densify(window: &str, n: i64, dim: usize, default: i64) -> Result<Outcome, InputError> {
    let cells = parse_window(window, dim)?;
    let y = periodic_densify(&cells, n, dim, default).map_err(input)?;
    let values: Vec<BigInt> = y.values.iter().map(|&v| BigInt::from(v)).collect();
    let r = Record::new("densify")
        .field("n", BigInt::from(n))
        .field("dim", dim)
        .field("lattice", y.lattice.to_string())
        .field("values", values);
    Ok(Outcome::ok(vec![r]))
}

fn run_demo(which: &Demo) -> Result<Outcome, InputError> {
    let r = match which {
        Demo::ShiftEmbed { m } => {
            let rep = shift_embed_demo(*m).map_err(input)?;
            Record::new("shift_embed")
                .field("level", rep.level)
                .field("samples", rep.samples_checked)
                .field("injective_on_samples", rep.injective_on_samples)
                .field("excluded", rep.excluded_target.iter().map(ToString::to_string).collect::<Vec<_>>())
                .field("excluded_has_preimage", rep.excluded_has_preimage)
        }
        Demo::Padic { p, m } => {
            let rep = padic_times_p_demo(*p, *m).map_err(input)?;
            Record::new("padic")
                .field("p", BigInt::from(rep.p))
                .field("level", rep.level)
                .field("injective", rep.injective)
                .field("cokernel", rep.cokernel.invariant_factors().to_vec())
                .field("image_index", rep.image_index())
        }
    };
    Ok(Outcome::ok(vec![r]))
}
