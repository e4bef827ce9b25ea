//! The `groth` command line.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::basis::{
    expand, grothendieck, hpolynomial, reassemble, schubert, stable_expansion, structure_constants,
    ExpansionError, ExpansionMethod, Family, HMethod,
};
use crate::chains::{
    climbing_chains, enumerate_climbing_marked_chains, groth_from_chains, h_from_chains,
    marked_chains, Marking,
};
use crate::hecke::{cauchy_product, HeckeBasis};
use crate::perm::{Permutation, PermError, SetComposition};
use crate::pipedream::{
    enumerate_double_rcgraphs, enumerate_rcgraphs, groth_from_double, groth_from_rcgraphs,
    h_from_double, h_from_rcgraphs, GrothVariant, HVariant, Side,
};
use crate::poly::Polynomial;
use crate::subst::{
    decompose_with, extension, ls_substitution, schubert_coefficient_as_constant,
    substitute_first_variable, substitute_single, two_set_extension, FactorBasis,
    FirstVariableMethod, SubstError, SubstitutionExpansion,
};
use crate::verify::{self, Suite};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Subst(#[from] SubstError),
    #[error(transparent)]
    Expansion(#[from] ExpansionError),
    /// Carries the report to print before exiting.
    #[error("verification failed")]
    Verification(String),
}

impl CliError {
    /// 1 for a failed verification, 2 for anything the user got wrong.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            _ => 2,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Parser, Debug)]
#[command(name = "groth", version, about = "Schubert, Grothendieck and H-polynomials with exact arithmetic")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    #[value(name = "G", alias = "g")]
    Grothendieck,
    #[value(name = "S", alias = "s")]
    Schubert,
    #[value(name = "H", alias = "h")]
    H,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Construction {
    Operators,
    Alternating,
    Hecke,
    Rcgraph,
    DoubleRcgraph,
    Chains,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Right,
    Left,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::Right => Side::Right,
            SideArg::Left => Side::Left,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    CrossConstructions,
    Bijections,
    Identities,
    Substitution,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EnumerateKind {
    Rcgraphs,
    Double,
    Chains,
    MarkedChains,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MarkingArg {
    Groth,
    Hpoly,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print a Schubert, Grothendieck or H-polynomial.
    Poly {
        #[arg(value_enum)]
        family: FamilyArg,
        /// Permutation in one-line notation, e.g. 1,4,3,2.
        w: Permutation,
        /// Rank of the ambient symmetric group (required for H).
        #[arg(long)]
        n: Option<usize>,
        /// Use the second alphabet y.
        #[arg(long)]
        double: bool,
        #[arg(long, value_enum, default_value_t = Construction::Operators)]
        construction: Construction,
        #[arg(long, value_enum, default_value_t = SideArg::Right)]
        side: SideArg,
    },
    /// Expand a polynomial in x in the Grothendieck or Schubert basis.
    Expand {
        /// Polynomial such as "x1^2 + x1*x2 - x1^2*x2".
        poly: String,
        #[arg(long = "N", visible_alias = "n")]
        n: usize,
        #[arg(long, value_enum, default_value_t = FamilyArg::Grothendieck)]
        basis: FamilyArg,
        /// Solve the full linear system instead of subtracting leading terms.
        #[arg(long)]
        linear: bool,
        /// Verify that the expansion reassembles to the input.
        #[arg(long)]
        check: bool,
    },
    /// Structure constants c^w_{u,v} of a product of two basis polynomials.
    Constants {
        u: Permutation,
        v: Permutation,
        #[arg(long = "N", visible_alias = "n")]
        n: Option<usize>,
        #[arg(long, value_enum, default_value_t = FamilyArg::Grothendieck)]
        basis: FamilyArg,
        /// Verify that the full stable expansion reassembles to the product.
        #[arg(long)]
        check: bool,
    },
    /// Specializations and decompositions.
    Subst {
        #[command(subcommand)]
        kind: SubstCommand,
    },
    /// List rc-graphs or chains with their count.
    Enumerate {
        #[arg(value_enum)]
        kind: EnumerateKind,
        w: Permutation,
        #[arg(long)]
        n: Option<usize>,
        /// For chains: climbing chains up to the longest element.
        #[arg(long)]
        climbing: bool,
        /// For chains without --climbing: the k of the k-Bruhat order.
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, value_enum, default_value_t = MarkingArg::Groth)]
        marking: MarkingArg,
    },
    /// Draw the rc-graphs of a permutation with absorbable positions marked.
    Pipedreams {
        w: Permutation,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value_t = SideArg::Right)]
        side: SideArg,
        /// Draw double rc-graphs.
        #[arg(long)]
        double: bool,
    },
    /// Run a cross-validation suite.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 4)]
        nmax: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum SubstCommand {
    /// G_w(y, x1, ..., x_{n-1}) in powers of y and G_v(x).
    First {
        w: Permutation,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value_t = FirstMethod::Chains)]
        method: FirstMethod,
    },
    /// G_w(x1, ..., x_{q-1}, y, x_q, ...) in powers of y and G_u(x).
    Single {
        w: Permutation,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Split the variables into two sets P and Q.
    TwoSet {
        w: Permutation,
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        q: Vec<usize>,
        #[arg(long, value_enum, default_value_t = FamilyArg::Grothendieck)]
        basis: FamilyArg,
        #[command(flatten)]
        check: CheckFlag,
    },
    /// Split the variables into several sets, e.g. --parts 1,3/2/4.
    Multi {
        w: Permutation,
        #[arg(long)]
        parts: String,
        #[arg(long, value_enum, default_value_t = FamilyArg::Grothendieck)]
        basis: FamilyArg,
        #[command(flatten)]
        check: CheckFlag,
    },
    /// A Schubert polynomial coefficient as a structure constant.
    Monomial {
        w: Permutation,
        #[arg(long, value_delimiter = ',', required = true)]
        exponents: Vec<usize>,
    },
}

#[derive(Args, Debug, Clone, Copy)]
pub struct CheckFlag {
    /// Verify the expansion against the direct specialization.
    #[arg(long)]
    check: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FirstMethod {
    Chains,
    Constants,
    Operators,
}

fn family_of(f: FamilyArg) -> Result<Family, CliError> {
    match f {
        FamilyArg::Grothendieck => Ok(Family::Grothendieck),
        FamilyArg::Schubert => Ok(Family::Schubert),
        FamilyArg::H => Err(usage("H-polynomials are not a stable basis; use G or S")),
    }
}

fn factor_basis(f: FamilyArg) -> FactorBasis {
    match f {
        FamilyArg::Grothendieck => FactorBasis::Grothendieck,
        FamilyArg::Schubert => FactorBasis::Schubert,
        FamilyArg::H => FactorBasis::H,
    }
}

fn rank(w: &Permutation, n: Option<usize>) -> Result<usize, CliError> {
    match n {
        Some(n) if !w.fits(n) => Err(usage(format!("{w} is not in S_{n}"))),
        Some(n) => Ok(n),
        None => Ok(w.support().max(1)),
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn render_poly(p: &Polynomial, format: Format) -> String {
    match format {
        Format::Text => format!("{}\n", p.to_text()),
        Format::Json => json(p),
    }
}

/// Parses the arguments and runs the command, returning what to print.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let format = cli.format;
    match &cli.command {
        Command::Poly {
            family,
            w,
            n,
            double,
            construction,
            side,
        } => {
            let p = poly_command(*family, w, *n, *double, *construction, (*side).into())?;
            Ok(render_poly(&p, format))
        }
        Command::Expand {
            poly,
            n,
            basis,
            linear,
            check,
        } => {
            let p: Polynomial = poly.parse().map_err(|e| usage(format!("{e}")))?;
            let method = if *linear {
                ExpansionMethod::LinearSolve
            } else {
                ExpansionMethod::Greedy
            };
            let e = expand(&p, *n, family_of(*basis)?, method)?;
            if *check && e.reconstruct() != p {
                return Err(CliError::Verification(String::new()));
            }
            Ok(match format {
                Format::Text => format!("{}\n", e.to_text()),
                Format::Json => json(&e),
            })
        }
        Command::Constants {
            u,
            v,
            n,
            basis,
            check,
        } => {
            let family = family_of(*basis)?;
            let n = rank(u, *n).and_then(|m| rank(v, Some(m.max(v.support()))))?;
            let e = structure_constants(u, v, n, family);
            if *check {
                let product = &*crate::basis::basis_polynomial(family, u) * &*crate::basis::basis_polynomial(family, v);
                let full = stable_expansion(&product, family)?;
                if reassemble(family, &full) != product {
                    return Err(CliError::Verification(String::new()));
                }
            }
            Ok(match format {
                Format::Text => format!("{}\n", e.to_text()),
                Format::Json => json(&e),
            })
        }
        Command::Subst { kind } => subst_command(kind, format),
        Command::Enumerate {
            kind,
            w,
            n,
            climbing,
            k,
            marking,
        } => enumerate_command(*kind, w, rank(w, *n)?, *climbing, *k, *marking, format),
        Command::Pipedreams { w, n, side, double } => {
            Ok(pipedreams_command(w, rank(w, *n)?, (*side).into(), *double, format))
        }
        Command::Verify { suite, nmax } => {
            let suites: Vec<Suite> = match suite {
                SuiteArg::CrossConstructions => vec![Suite::CrossConstructions],
                SuiteArg::Bijections => vec![Suite::Bijections],
                SuiteArg::Identities => vec![Suite::Identities],
                SuiteArg::Substitution => vec![Suite::Substitution],
                SuiteArg::All => Suite::ALL.to_vec(),
            };
            let reports: Vec<verify::Report> = suites.into_iter().map(|s| verify::run(s, *nmax)).collect();
            let out = match format {
                Format::Text => reports.iter().map(|r| r.to_text()).collect::<Vec<_>>().join("\n"),
                Format::Json => json(&reports),
            };
            if reports.iter().all(|r| r.passed()) {
                Ok(out)
            } else {
                Err(CliError::Verification(out))
            }
        }
    }
}

fn poly_command(
    family: FamilyArg,
    w: &Permutation,
    n: Option<usize>,
    double: bool,
    construction: Construction,
    side: Side,
) -> Result<Polynomial, CliError> {
    let unsupported = || {
        usage(format!(
            "construction {construction:?} is not available for this family{}",
            if double { " with --double" } else { "" }
        ))
    };
    match family {
        FamilyArg::Schubert => {
            if construction != Construction::Operators || double {
                return Err(unsupported());
            }
            Ok((*schubert(w)).clone())
        }
        FamilyArg::Grothendieck => {
            let n = rank(w, n)?;
            Ok(match construction {
                Construction::Operators => (*grothendieck(w, double)).clone(),
                Construction::Hecke => cauchy_product(n, double).coefficient(w),
                Construction::Rcgraph => groth_from_rcgraphs(w, n, GrothVariant::MarkedSum, side, double),
                Construction::DoubleRcgraph if double => groth_from_double(w, n, GrothVariant::MarkedSum, side),
                Construction::Chains => groth_from_chains(w, n, double),
                _ => return Err(unsupported()),
            })
        }
        FamilyArg::H => {
            let n = n.ok_or_else(|| usage("H-polynomials need the rank: pass --n"))?;
            rank(w, Some(n))?;
            Ok(match construction {
                Construction::Operators => hpolynomial(w, n, double, HMethod::Operator),
                Construction::Alternating => hpolynomial(w, n, double, HMethod::Alternating),
                Construction::Hecke => cauchy_product(n, double)
                    .coefficients_in(HeckeBasis::ETilde)
                    .remove(w)
                    .unwrap_or_default(),
                Construction::Rcgraph => h_from_rcgraphs(w, n, HVariant::MarkedSum, side, double),
                Construction::DoubleRcgraph if double => h_from_double(w, n, HVariant::MarkedSum, side),
                Construction::Chains => h_from_chains(w, n, double),
                _ => return Err(unsupported()),
            })
        }
    }
}

fn render_expansion(e: &SubstitutionExpansion, format: Format) -> String {
    match format {
        Format::Text => e.to_text(),
        Format::Json => json(e),
    }
}

fn parse_parts(s: &str) -> Result<Vec<Vec<usize>>, CliError> {
    s.split('/')
        .map(|part| {
            part.split(',')
                .map(|x| x.trim().parse::<usize>().map_err(|_| usage(format!("bad part list {s:?}"))))
                .collect()
        })
        .collect()
}

fn subst_command(kind: &SubstCommand, format: Format) -> Result<String, CliError> {
    match kind {
        SubstCommand::First { w, n, method } => {
            let n = rank(w, *n)?;
            let e = match method {
                FirstMethod::Chains => substitute_first_variable(w, n, FirstVariableMethod::Chains)?,
                FirstMethod::Constants => substitute_first_variable(w, n, FirstVariableMethod::Constants)?,
                FirstMethod::Operators => ls_substitution(w, n)?,
            };
            Ok(render_expansion(&e, format))
        }
        SubstCommand::Single { w, q, n } => {
            let n = rank(w, *n)?.max(q + 1);
            Ok(render_expansion(&substitute_single(w, *q, n)?, format))
        }
        SubstCommand::TwoSet { w, p, q, basis, check } => {
            let b = factor_basis(*basis);
            let comp = SetComposition::new(vec![p.clone(), q.clone()])?;
            let ext = two_set_extension(w, p, q, b)?;
            let e = decompose_with(w, &ext, b)?;
            if check.check && !crate::subst::check_decomposition(w, &comp, &ext, &e)? {
                return Err(CliError::Verification(String::new()));
            }
            Ok(render_expansion(&e, format))
        }
        SubstCommand::Multi { w, parts, basis, check } => {
            let b = factor_basis(*basis);
            let comp = SetComposition::new(parse_parts(parts)?)?;
            let ext = extension(w, &comp, b)?;
            let e = decompose_with(w, &ext, b)?;
            if check.check && !crate::subst::check_decomposition(w, &comp, &ext, &e)? {
                return Err(CliError::Verification(String::new()));
            }
            Ok(render_expansion(&e, format))
        }
        SubstCommand::Monomial { w, exponents } => {
            let (constant, direct) = schubert_coefficient_as_constant(w, exponents)?;
            if constant != direct {
                return Err(CliError::Verification(String::new()));
            }
            Ok(match format {
                Format::Text => format!("{constant}\n"),
                Format::Json => json(&serde_json::json!({
                    "exponents": exponents,
                    "constant": constant.to_string(),
                    "coefficient": direct.to_string(),
                })),
            })
        }
    }
}

fn enumerate_command(
    kind: EnumerateKind,
    w: &Permutation,
    n: usize,
    climbing: bool,
    k: usize,
    marking: MarkingArg,
    format: Format,
) -> Result<String, CliError> {
    let marking = match marking {
        MarkingArg::Groth => Marking::Groth,
        MarkingArg::Hpoly => Marking::Hpoly,
    };
    let mut s = String::new();
    match kind {
        EnumerateKind::Rcgraphs => {
            let graphs = enumerate_rcgraphs(w, n);
            if format == Format::Json {
                return Ok(json(&serde_json::json!({"count": graphs.len(), "items": graphs})));
            }
            writeln!(s, "count: {}", graphs.len()).unwrap();
            for g in &graphs {
                writeln!(s, "{}", serde_json::to_string(g).unwrap()).unwrap();
            }
        }
        EnumerateKind::Double => {
            let graphs = enumerate_double_rcgraphs(w, n);
            if format == Format::Json {
                return Ok(json(&serde_json::json!({"count": graphs.len(), "items": graphs})));
            }
            writeln!(s, "count: {}", graphs.len()).unwrap();
            for g in &graphs {
                writeln!(s, "{}", serde_json::to_string(g).unwrap()).unwrap();
            }
        }
        EnumerateKind::Chains if climbing => {
            let chains = climbing_chains(w, n);
            let marked = enumerate_climbing_marked_chains(w, n, marking).len();
            if format == Format::Json {
                return Ok(json(&serde_json::json!({
                    "count": chains.len(),
                    "marked": marked,
                    "items": chains,
                })));
            }
            writeln!(s, "count: {}", chains.len()).unwrap();
            writeln!(s, "marked: {marked}").unwrap();
            for c in &chains {
                let labels: Vec<String> = c.iter().map(|(a, b)| format!("({a},{b})")).collect();
                writeln!(s, "{}", labels.join(" ")).unwrap();
            }
        }
        EnumerateKind::Chains => {
            if k == 0 || k >= n {
                return Err(usage(format!("k must satisfy 1 ≤ k < {n}")));
            }
            let chains = marked_chains(w, n, k, n * n);
            if format == Format::Json {
                return Ok(json(&serde_json::json!({"count": chains.len(), "items": chains})));
            }
            writeln!(s, "count: {}", chains.len()).unwrap();
            for c in &chains {
                writeln!(s, "{}", serde_json::to_string(c).unwrap()).unwrap();
            }
        }
        EnumerateKind::MarkedChains => {
            let chains = enumerate_climbing_marked_chains(w, n, marking);
            if format == Format::Json {
                return Ok(json(&serde_json::json!({"count": chains.len(), "items": chains})));
            }
            writeln!(s, "count: {}", chains.len()).unwrap();
            for c in &chains {
                writeln!(s, "{}", serde_json::to_string(c).unwrap()).unwrap();
            }
        }
    }
    Ok(s)
}

fn pipedreams_command(w: &Permutation, n: usize, side: Side, double: bool, format: Format) -> String {
    let mark = match side {
        Side::Right => 'o',
        Side::Left => '#',
    };
    if double {
        let graphs = enumerate_double_rcgraphs(w, n);
        if format == Format::Json {
            return json(&graphs);
        }
        return graphs.iter().map(|g| g.render()).collect::<Vec<_>>().join("\n");
    }
    let graphs = enumerate_rcgraphs(w, n);
    if format == Format::Json {
        let items: Vec<_> = graphs
            .iter()
            .map(|g| serde_json::json!({"crossings": g, "absorbable": g.absorbable(side).into_iter().collect::<Vec<_>>()}))
            .collect();
        return json(&items);
    }
    graphs
        .iter()
        .map(|g| g.render(&g.absorbable(side), mark))
        .collect::<Vec<_>>()
        .join("\n")
}
