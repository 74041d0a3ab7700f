use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use stonean_core::algebra::{fixtures, identity_battery, parse_algebra, validate, write_algebra};
use stonean_core::corpus::{counts_by_size, enumerate_with, Constraints, Options};
use stonean_core::filters::{all_ifilters, all_lattice_filters, crt_solve, generate_ifilter, quotient};
use stonean_core::freealg::{
    assemble_free_capped, goedel_free_oracle, goedel_hoop_stalks, triple_of_free, DEFAULT_SIZE_CAP,
};
use stonean_core::reconstruct::{global_sections, roundtrip};
use stonean_core::stonean::{adjoin_bottom, decompose, stone_witness, stonean_equivalence_battery};
use stonean_core::terms::{parse_equation, satisfies, translate_dense};
use stonean_core::triples::{functor_t_object, parse_triple, validate_triple, write_triple};
use stonean_core::{are_isomorphic, ElementSet, Error, FiniteAlgebra, ValidationReport};

#[derive(Parser, Debug)]
#[command(name = "stonean-lab", version, about = "Finite Stonean residuated lattices and their triples")]
pub struct Cli {
    /// Seed for randomized search orders.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for corpus-wide commands.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the residuated-lattice laws of an algebra file.
    Validate {
        file: PathBuf,
        /// Also run the derived identity battery.
        #[arg(long)]
        battery: bool,
    },
    /// Stonean checks, decomposition and bottom adjunction.
    #[command(subcommand)]
    Stonean(StoneanCommand),
    /// List the i-filters (or lattice filters) of an algebra.
    Filters {
        file: PathBuf,
        #[arg(long)]
        lattice: bool,
    },
    /// Quotient by the i-filter generated by the given elements.
    Quotient { file: PathBuf, generators: Vec<String> },
    /// Solve x ≡ a (mod F) systems; each constraint is `a:g1,g2,...`, F generated by the g's.
    Crt {
        file: PathBuf,
        #[arg(required = true)]
        constraints: Vec<String>,
    },
    /// Triples of algebras and triple files.
    #[command(subcommand)]
    Triple(TripleCommand),
    /// Global-section algebra of a triple file.
    Reconstruct { file: PathBuf },
    /// Triple of an algebra, reconstructed and matched back to it.
    Roundtrip { file: PathBuf },
    /// Check an equation on an algebra.
    CheckEq {
        file: PathBuf,
        #[arg(allow_hyphen_values = true)]
        equation: String,
        /// Substitute each variable x by ~~x -> x first.
        #[arg(long)]
        dense: bool,
    },
    /// Free algebras on finitely many generators.
    Free(FreeArgs),
    /// Enumerate algebras up to isomorphism.
    Enumerate(EnumerateArgs),
    /// Isomorphism test between two algebra files.
    Iso { first: PathBuf, second: PathBuf },
    /// Write the built-in fixtures as algebra files.
    Fixtures {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum StoneanCommand {
    /// Evaluate the three Stonean conditions.
    Check { file: PathBuf },
    /// Split an element into its Boolean and dense parts.
    Decompose { file: PathBuf, element: String },
    /// Print the algebra with a new bottom adjoined.
    Adjoin { file: PathBuf },
}

#[derive(Subcommand, Debug)]
enum TripleCommand {
    /// Print the triple of a Stonean algebra.
    Of { file: PathBuf },
    /// Check the triple axioms of a triple file.
    Validate { file: PathBuf },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Variety {
    Goedel,
    Boolean,
    Product,
}

#[derive(Args, Debug)]
struct FreeArgs {
    #[arg(long, value_enum)]
    variety: Variety,
    #[arg(short, default_value_t = 1)]
    n: usize,
    /// Cross-check against the term-closure construction.
    #[arg(long)]
    oracle: bool,
    #[arg(long, default_value_t = DEFAULT_SIZE_CAP)]
    cap: usize,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[arg(short)]
    n: usize,
    #[arg(long)]
    stonean: bool,
    #[arg(long)]
    distributive: bool,
    #[arg(long)]
    unbounded: bool,
    /// Directory for one file per class and a manifest.
    #[arg(long)]
    out: Option<PathBuf>,
}

pub enum Outcome {
    Holds,
    Fails,
}

impl Outcome {
    pub fn code(&self) -> u8 {
        match self {
            Outcome::Holds => 0,
            Outcome::Fails => 1,
        }
    }

    fn of(holds: bool) -> Self {
        if holds {
            Outcome::Holds
        } else {
            Outcome::Fails
        }
    }
}

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Precondition(_) | Error::Infeasible(..) | Error::ProductAxiom { .. } | Error::Invariant(_) => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Run = Result<Outcome, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &Path) -> Result<FiniteAlgebra, Failure> {
    Ok(parse_algebra(&read(path)?)?)
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))
}

fn show_map(out: &mut String, src: &FiniteAlgebra, dst: &FiniteAlgebra, map: &[usize]) {
    for (x, &y) in map.iter().enumerate() {
        let _ = writeln!(out, "{} -> {}", src.element_name(x), dst.element_name(y));
    }
}

fn show_indexed(out: &mut String, report: &ValidationReport) {
    if report.is_ok() {
        out.push_str("ok\n");
    }
    for v in &report.violations {
        let w: Vec<String> = v.witness.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "violated {} at ({})", v.law, w.join(", "));
    }
}

pub fn run(cli: Cli, out: &mut String) -> Run {
    match cli.command {
        Command::Validate { file, battery } => {
            let a = load(&file)?;
            let mut report = validate(&a);
            if battery && report.is_ok() {
                report.extend(identity_battery(&a));
            }
            let _ = write!(out, "{}", report.display(&a));
            Ok(Outcome::of(report.is_ok()))
        }
        Command::Stonean(cmd) => stonean(cmd, out),
        Command::Filters { file, lattice } => {
            let a = load(&file)?;
            let list = if lattice {
                all_lattice_filters(&a)
            } else {
                all_ifilters(&a)
            };
            for f in &list.filters {
                let _ = writeln!(out, "{}", f.serialize(&a));
            }
            Ok(Outcome::Holds)
        }
        Command::Quotient { file, generators } => {
            let a = load(&file)?;
            let gens = resolve_all(&a, generators.iter().map(String::as_str))?;
            let f = generate_ifilter(&a, &ElementSet::from_indices(a.size(), gens));
            let q = quotient(&a, &f)?;
            out.push_str(&write_algebra(&q.quotient));
            Ok(Outcome::Holds)
        }
        Command::Crt { file, constraints } => {
            let a = load(&file)?;
            let mut system = Vec::new();
            for c in &constraints {
                let (value, gens) = c
                    .split_once(':')
                    .ok_or_else(|| Failure::usage(format!("constraint {c:?} is not of the form a:g1,g2")))?;
                let x = a.resolve(value)?;
                let gens = resolve_all(&a, gens.split(',').filter(|g| !g.is_empty()))?;
                system.push((x, generate_ifilter(&a, &ElementSet::from_indices(a.size(), gens))));
            }
            match crt_solve(&a, &system) {
                Ok(x) => {
                    let _ = writeln!(out, "{}", a.element_name(x));
                    Ok(Outcome::Holds)
                }
                Err(Error::Infeasible(i, j)) => {
                    let _ = writeln!(out, "infeasible: constraints {i} and {j} disagree");
                    Ok(Outcome::Fails)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Triple(TripleCommand::Of { file }) => {
            let a = load(&file)?;
            out.push_str(&write_triple(&functor_t_object(&a)?.triple));
            Ok(Outcome::Holds)
        }
        Command::Triple(TripleCommand::Validate { file }) => {
            let t = parse_triple(&read(&file)?)?;
            let report = validate_triple(&t);
            show_indexed(out, &report);
            Ok(Outcome::of(report.is_ok()))
        }
        Command::Reconstruct { file } => {
            let t = parse_triple(&read(&file)?)?;
            let sections = global_sections(&t)?;
            out.push_str(&write_algebra(&sections.algebra));
            Ok(Outcome::Holds)
        }
        Command::Roundtrip { file } => {
            let a = load(&file)?;
            let rt = roundtrip(&a)?;
            let _ = writeln!(out, "isomorphic to {} ({} elements)", rt.sections.algebra.name(), a.size());
            show_map(out, &a, &rt.sections.algebra, &rt.iso);
            Ok(Outcome::Holds)
        }
        Command::CheckEq { file, equation, dense } => {
            let a = load(&file)?;
            let mut eq = parse_equation(&equation)?;
            if dense {
                eq = translate_dense(&eq)?;
                let _ = writeln!(out, "{eq}");
            }
            let s = satisfies(&a, &eq)?;
            if s.holds {
                out.push_str("ok\n");
            } else {
                let _ = writeln!(out, "countermodel {}", s.describe(&a));
            }
            Ok(Outcome::of(s.holds))
        }
        Command::Free(args) => free(args, out),
        Command::Enumerate(args) => enumerate(args, cli.seed, cli.jobs, out),
        Command::Iso { first, second } => {
            let (a, b) = (load(&first)?, load(&second)?);
            match are_isomorphic(&a, &b) {
                Some(map) => {
                    show_map(out, &a, &b, &map);
                    Ok(Outcome::Holds)
                }
                None => {
                    out.push_str("not isomorphic\n");
                    Ok(Outcome::Fails)
                }
            }
        }
        Command::Fixtures { out: dir } => {
            for a in fixtures() {
                let file = format!("{}.alg", a.name().to_ascii_lowercase());
                match &dir {
                    Some(d) => write_file(&d.join(&file), &write_algebra(&a))?,
                    None => {
                        let _ = writeln!(out, "{file}");
                    }
                }
            }
            Ok(Outcome::Holds)
        }
    }
}

fn resolve_all<'a>(
    a: &FiniteAlgebra,
    tokens: impl Iterator<Item = &'a str>,
) -> Result<Vec<usize>, Failure> {
    tokens.map(|t| a.resolve(t).map_err(Failure::from)).collect()
}

fn stonean(cmd: StoneanCommand, out: &mut String) -> Run {
    match cmd {
        StoneanCommand::Check { file } => {
            let a = load(&file)?;
            let c = stonean_equivalence_battery(&a)?;
            let yes = |b: bool| if b { "yes" } else { "no" };
            let _ = writeln!(out, "stone-equation {}", yes(c.stone_equation));
            let _ = writeln!(out, "pseudo-de-morgan {}", yes(c.pseudo_de_morgan));
            let _ = writeln!(out, "negations-boolean {}", yes(c.negations_boolean));
            match stone_witness(&a)? {
                None => out.push_str("stonean\n"),
                Some(x) => {
                    let _ = writeln!(out, "not stonean: x={}", a.element_name(x));
                }
            }
            Ok(Outcome::of(c.stone_equation))
        }
        StoneanCommand::Decompose { file, element } => {
            let a = load(&file)?;
            let x = a.resolve(&element)?;
            let (b, d) = decompose(&a, x)?;
            let _ = writeln!(
                out,
                "{} = {} * {}",
                a.element_name(x),
                a.element_name(b),
                a.element_name(d)
            );
            Ok(Outcome::Holds)
        }
        StoneanCommand::Adjoin { file } => {
            let a = load(&file)?;
            out.push_str(&write_algebra(&adjoin_bottom(&a)));
            Ok(Outcome::Holds)
        }
    }
}

fn free(args: FreeArgs, out: &mut String) -> Run {
    let n = args.n;
    match args.variety {
        Variety::Boolean => {
            let exp = 1u32
                .checked_shl(n as u32)
                .ok_or_else(|| Failure::usage("too many generators"))?;
            let _ = writeln!(out, "boolean n={n}: B2^{exp}");
            match 2u128.checked_pow(exp) {
                Some(size) => {
                    let _ = writeln!(out, "size {size}");
                }
                None => out.push_str("size 2^2^n exceeds u128\n"),
            }
            Ok(Outcome::Holds)
        }
        Variety::Product => Err(Failure {
            code: 1,
            message: "product algebras: the dense parts are cancellative hoops, whose free algebras \
                      are infinite, so no finite assembly exists"
                .into(),
        }),
        Variety::Goedel => {
            let stalks = goedel_hoop_stalks(n, args.cap)?;
            let sizes: Vec<String> = stalks.iter().map(|s| s.size().to_string()).collect();
            let _ = writeln!(out, "stalks {}", sizes.join(" "));
            let free = assemble_free_capped(n, &stalks, args.cap)?;
            let _ = writeln!(out, "assembled {}", free.size());
            let ft = triple_of_free(n, &stalks)?;
            let _ = writeln!(out, "triple B {} D {}", ft.triple.b.size(), ft.triple.d.size());
            if !args.oracle {
                return Ok(Outcome::Holds);
            }
            let oracle = goedel_free_oracle(n, args.cap)?;
            let _ = writeln!(out, "term closure {}", oracle.algebra.size());
            let iso = are_isomorphic(&free, &oracle.algebra).is_some();
            let _ = writeln!(out, "isomorphic {}", if iso { "yes" } else { "no" });
            Ok(Outcome::of(iso))
        }
    }
}

fn enumerate(args: EnumerateArgs, seed: u64, jobs: usize, out: &mut String) -> Run {
    let options = Options {
        constraints: Constraints {
            bounded: !args.unbounded,
            stonean: args.stonean,
            distributive: args.distributive,
        },
        seed: Some(seed),
        parallel: jobs > 1,
        limit: None,
    };
    let run = || enumerate_with(args.n, &options);
    let algebras = if jobs > 1 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Failure::usage(format!("cannot start {jobs} workers: {e}")))?
            .install(run)?
    } else {
        run()?
    };
    let mut manifest = String::new();
    for (size, count) in counts_by_size(&algebras) {
        let _ = writeln!(manifest, "size {size}: {count}");
    }
    let _ = writeln!(manifest, "total: {}", algebras.len());
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir)
            .map_err(|e| Failure::usage(format!("cannot create {}: {e}", dir.display())))?;
        for a in &algebras {
            let file = format!("{}.alg", a.name());
            write_file(&dir.join(&file), &write_algebra(a))?;
            let _ = writeln!(manifest, "{file}");
        }
        write_file(&dir.join("manifest.txt"), &manifest)?;
    }
    out.push_str(&manifest);
    Ok(Outcome::Holds)
}
