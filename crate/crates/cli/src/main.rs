use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use solvgroups::catalog::{
    identify, parse_reference, read_catalog_dir, read_group_file, verify_counts, write_order_file, Catalog,
    REFERENCE_COUNTS,
};
use solvgroups::cover::covering_group;
use solvgroups::descend::{descendants_of_cover, DescendOptions};
use solvgroups::fclass1::{solvable_groups_fclass1, ConstructedGroup};
use solvgroups::pcgroup::fingerprint::fingerprint;
use solvgroups::{Budget, Error};

#[derive(Parser)]
#[command(name = "solvgroups", version, about = "Construct the finite solvable groups of a given order")]
struct Cli {
    /// Largest orbit or point set enumerated before giving up.
    #[arg(long, global = true)]
    budget_orbit: Option<usize>,
    /// Largest number of subspaces enumerated before giving up.
    #[arg(long, global = true)]
    budget_subspaces: Option<usize>,
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Fail instead of taking a randomized code path (none exists; the engine is deterministic).
    #[arg(long, global = true)]
    seedless: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Filter {
    NonNilpotent,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// All non-nilpotent solvable groups of an order.
    Construct {
        #[arg(long)]
        order: u64,
        #[arg(long, value_enum, default_value_t = Filter::NonNilpotent)]
        filter: Filter,
        /// Directory for the catalog files and the JSON summary.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Groups of F-class 1 with a given order and F-rank.
    Fclass1 {
        #[arg(long)]
        order: u64,
        #[arg(long)]
        rank: u64,
    },
    /// Descendants of a group.
    Descendants {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        stepsize: Vec<u64>,
    },
    /// Cover data of a group.
    Cover {
        #[arg(long)]
        group: PathBuf,
    },
    /// Compare non-nilpotent counts with a reference table.
    Verify {
        /// Comma-separated orders, or a range `a..b` of orders with reference rows.
        #[arg(long)]
        orders: String,
        /// Lines `order total non_nilpotent`; the built-in table when omitted.
        #[arg(long)]
        reference: Option<PathBuf>,
    },
    /// Catalog entries isomorphic to a group.
    Id {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        catalog: PathBuf,
    },
}

enum Outcome {
    Ok,
    Mismatch,
}

fn budget(cli: &Cli) -> Budget {
    let mut b = Budget::default();
    if let Some(x) = cli.budget_orbit {
        b.orbit = x;
    }
    if let Some(x) = cli.budget_subspaces {
        b.subspaces = x;
    }
    b
}

fn emit(cli: &Cli, text: String, value: serde_json::Value) {
    match cli.format {
        Format::Text => print!("{text}"),
        Format::Json => println!("{}", serde_json::to_string_pretty(&value).expect("serializable")),
    }
}

fn group_row(g: &ConstructedGroup) -> (String, serde_json::Value) {
    let fp = fingerprint(&g.pres);
    let text = format!(
        "{:>6} {:>3} {:>6}  abelian {:?} derived {} classes {}\n",
        g.order(),
        g.f_class,
        g.f_rank,
        fp.abelian_invariants,
        fp.derived_length,
        fp.class_count.map_or("-".to_string(), |c| c.to_string())
    );
    (text, json!({"order": g.order(), "f_class": g.f_class, "f_rank": g.f_rank, "fingerprint": fp}))
}

fn parse_orders(spec: &str) -> anyhow::Result<Vec<u64>> {
    if let Some((a, b)) = spec.split_once("..") {
        let (a, b): (u64, u64) = (a.trim().parse()?, b.trim().parse()?);
        let rows = parse_reference(REFERENCE_COUNTS)?;
        return Ok(rows.iter().map(|r| r.order).filter(|&o| o >= a && o <= b).collect());
    }
    spec.split(',').filter(|s| !s.trim().is_empty()).map(|s| Ok(s.trim().parse()?)).collect()
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let budget = budget(cli);
    match &cli.command {
        Command::Construct { order, filter, out } => {
            let mut cat = Catalog::new(budget).with_threads(cli.threads);
            if let Some(dir) = out {
                cat = cat.with_cache(dir);
            }
            let summary = cat.summary(*order)?;
            if let Some(dir) = out {
                write_order_file(dir, *order, cat.entries(*order)?)?;
                let path = dir.join(format!("summary_{order}.json"));
                std::fs::write(&path, serde_json::to_string_pretty(&summary)? + "\n")
                    .with_context(|| path.display().to_string())?;
            }
            let mut text = format!("order {}: {} non-nilpotent groups\n", order, summary.non_nilpotent);
            for (k, n) in &summary.counts {
                text += &format!("  f_class,f_rank {k}: {n}\n");
            }
            let mut value = serde_json::to_value(&summary)?;
            if *filter == Filter::All {
                let reference = parse_reference(REFERENCE_COUNTS)?;
                match reference.iter().find(|r| r.order == *order) {
                    Some(r) => {
                        let nil = r.total - r.non_nilpotent;
                        text += &format!("  nilpotent (reference table): {nil}\n  total: {}\n", nil + summary.non_nilpotent as u64);
                        value["nilpotent_reference"] = json!(nil);
                    }
                    None => text += "  nilpotent groups are not constructed and the reference table has no row\n",
                }
            }
            emit(cli, text, value);
            Ok(Outcome::Ok)
        }
        Command::Fclass1 { order, rank } => {
            let gs = solvable_groups_fclass1(*rank, *order, &budget)?;
            let mut text = format!("{} groups of order {order}, F-class 1, F-rank {rank}\n", gs.len());
            let mut rows = Vec::new();
            for g in &gs {
                let (t, v) = group_row(g);
                text += &t;
                rows.push(v);
            }
            emit(cli, text, json!({"order": order, "rank": rank, "groups": rows}));
            Ok(Outcome::Ok)
        }
        Command::Descendants { group, stepsize } => {
            let g = read_group_file(group)?;
            let cover = covering_group(&g.pres)?;
            let filter = (!stepsize.is_empty()).then_some(stepsize.as_slice());
            let opts = DescendOptions { automorphisms: false, delta: false, budget };
            let ds = descendants_of_cover(&g, &cover, filter, &opts)?;
            let mut text = format!("{} descendants\n", ds.groups.len());
            let mut rows = Vec::new();
            for h in &ds.groups {
                let (t, v) = group_row(h);
                text += &t;
                rows.push(v);
            }
            emit(cli, text, json!({"count": ds.groups.len(), "descendants": rows}));
            Ok(Outcome::Ok)
        }
        Command::Cover { group } => {
            let g = read_group_file(group)?;
            let c = covering_group(&g.pres)?;
            let mut text = format!("generators {}\n|M| = {}\n", c.gens.len(), c.multiplicator_order());
            let mut parts = Vec::new();
            for (b, n) in c.blocks.iter().zip(&c.nucleus_parts) {
                text += &format!("|M_{}| = {}^{}  |N_{}| = {}^{}\n", b.p, b.p, b.dim(), b.p, b.p, n.dim());
                parts.push(json!({"p": b.p, "m_dim": b.dim(), "n_dim": n.dim()}));
            }
            text += &format!("|N| = {}\n", c.nucleus_order());
            emit(
                cli,
                text,
                json!({"generators": c.gens.len(), "m_order": c.multiplicator_order() as u64, "n_order": c.nucleus_order() as u64, "primes": parts}),
            );
            Ok(Outcome::Ok)
        }
        Command::Verify { orders, reference } => {
            let table = match reference {
                Some(p) => std::fs::read_to_string(p).with_context(|| p.display().to_string())?,
                None => REFERENCE_COUNTS.to_string(),
            };
            let rows = parse_reference(&table)?;
            let orders = parse_orders(orders)?;
            let mut cat = Catalog::new(budget).with_threads(cli.threads);
            let report = verify_counts(&mut cat, &orders, &rows)?;
            let mut text = String::new();
            for c in &report {
                let exp = c.expected.map_or("-".to_string(), |e| e.to_string());
                text += &format!("{:>6} computed {:>6} reference {:>6} {}\n", c.order, c.computed, exp, if c.ok() { "ok" } else { "MISMATCH" });
            }
            emit(cli, text, serde_json::to_value(&report)?);
            Ok(if report.iter().all(|c| c.ok()) { Outcome::Ok } else { Outcome::Mismatch })
        }
        Command::Id { group, catalog } => {
            let g = read_group_file(group)?;
            let entries = read_catalog_dir(catalog)?;
            let ids = identify(&g.pres, &entries)?;
            let text = if ids.is_empty() {
                "no match\n".to_string()
            } else {
                ids.iter().map(|(o, i)| format!("({o}, {i})\n")).collect()
            };
            emit(cli, text, json!({"candidates": ids}));
            Ok(Outcome::Ok)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Mismatch) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<Error>() {
                Some(err) if err.is_budget() => ExitCode::from(3),
                _ => ExitCode::FAILURE,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_lists() {
        assert_eq!(parse_orders("6,12, 18").unwrap(), vec![6, 12, 18]);
        assert_eq!(parse_orders("6..24").unwrap(), vec![6, 12, 18, 24]);
        assert!(parse_orders("").unwrap().is_empty());
        assert!(parse_orders("x").is_err());
    }
}
