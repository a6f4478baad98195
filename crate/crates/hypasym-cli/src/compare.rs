//! `compare`: asymptotic expansions against the reference evaluator over a
//! parameter grid. Rows are computed in parallel and written in grid order.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use hypasym::asym;
use hypasym::numfmt::g17;
use hypasym::reference::{eval_2f1, Params};
use hypasym::scalar::{rational_from_f64, rational_to_f64, rel_diff, C64};
use rayon::prelude::*;
use serde_json::json;

use crate::{complex_arg, emit, grid, CliError, CliResult, Format};

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Expansion {
    /// F(a, b+lambda; c+lambda; z) through the Pfaff-mapped series
    Pfaff,
    /// F(a, b; c+lambda; z) by Watson's lemma
    Watson,
    /// F(a, b; c+lambda; z) uniformly in large |z|
    UniformU,
    /// F(-n, 1; n+2; -z) by its erfc leading term
    BcaseErfc,
}

#[derive(Args)]
pub struct CompareArgs {
    #[arg(long, value_enum)]
    expansion: Expansion,
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    a: String,
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    b: String,
    #[arg(long, allow_hyphen_values = true, default_value = "2")]
    c: String,
    #[arg(long, allow_hyphen_values = true, default_value = "0.5")]
    z: String,
    /// Large parameter values (pfaff, watson, uniform-u)
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// Degrees (bcase-erfc)
    #[arg(long)]
    n: Option<String>,
    /// Expansion order S (number of terms for pfaff)
    #[arg(long, default_value_t = 4)]
    order: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Point {
    large: f64,
    a: C64,
    b: C64,
    c: C64,
    z: C64,
}

struct Row {
    point: Point,
    outcome: Result<(C64, C64), String>,
}

fn complex_text(z: C64) -> String {
    if z.im == 0.0 {
        g17(z.re)
    } else {
        let sign = if z.im < 0.0 { "" } else { "+" };
        format!("{}{sign}{}i", g17(z.re), g17(z.im))
    }
}

fn evaluate(e: Expansion, p: &Point, order: usize) -> hypasym::Result<(C64, C64)> {
    let Point { large: l, a, b, c, z } = *p;
    match e {
        Expansion::Pfaff => {
            let approx = asym::pfaff_fixed_z_expansion(a, b, c, z, l, order)?.value;
            Ok((approx, eval_2f1(&Params::new(a, b + l, c + l), z)?.value))
        }
        Expansion::Watson | Expansion::UniformU => {
            let approx = if e == Expansion::Watson {
                asym::watson_expansion(a, b, c, z, l, order)?
            } else {
                asym::uniform_a_expansion(a, b, c, z, l, order)?
            };
            Ok((approx.value, eval_2f1(&Params::new(a, b, c + l), z)?.value))
        }
        Expansion::BcaseErfc => {
            let n = l as u64;
            let approx = asym::bcase_erfc_approx(n, z.re)?;
            let exact = rational_to_f64(&asym::bcase_exact(n, &rational_from_f64(z.re)?));
            Ok((C64::new(approx, 0.0), C64::new(exact, 0.0)))
        }
    }
}

pub fn cmd_compare(args: &CompareArgs) -> CliResult<()> {
    let (large_name, larges) = if args.expansion == Expansion::BcaseErfc {
        let n = args.n.as_deref().unwrap_or("");
        let ns = grid("n", n, |t| t.parse::<u64>().map_err(|_| CliError::Usage(format!("bad degree '{t}'"))))?;
        ("n", ns.into_iter().map(|n| n as f64).collect::<Vec<_>>())
    } else {
        let l = args.lambda.as_deref().unwrap_or("");
        let ls = grid("lambda", l, |t| t.parse::<f64>().map_err(|_| CliError::Usage(format!("bad lambda '{t}'"))))?;
        ("lambda", ls)
    };
    let zs = grid("z", &args.z, complex_arg)?;
    let (a_s, b_s, c_s) = if args.expansion == Expansion::BcaseErfc {
        (vec![C64::new(0.0, 0.0)], vec![C64::new(1.0, 0.0)], vec![C64::new(0.0, 0.0)])
    } else {
        (grid("a", &args.a, complex_arg)?, grid("b", &args.b, complex_arg)?, grid("c", &args.c, complex_arg)?)
    };

    let mut points = Vec::new();
    for &a in &a_s {
        for &b in &b_s {
            for &c in &c_s {
                for &z in &zs {
                    for &large in &larges {
                        points.push(Point { large, a, b, c, z });
                    }
                }
            }
        }
    }
    let rows: Vec<Row> = points
        .into_par_iter()
        .map(|point| {
            let outcome = evaluate(args.expansion, &point, args.order).map_err(|e| e.to_string());
            Row { point, outcome }
        })
        .collect();

    let text = match args.format {
        Format::Csv => csv(large_name, args.expansion, args.order, &rows),
        Format::Json => json_rows(large_name, args.expansion, args.order, &rows),
    };
    emit(args.out.as_ref(), &text)
}

fn params_of(e: Expansion, p: &Point) -> (C64, C64, C64) {
    if e == Expansion::BcaseErfc {
        (C64::new(-p.large, 0.0), C64::new(1.0, 0.0), C64::new(p.large + 2.0, 0.0))
    } else {
        (p.a, p.b, p.c)
    }
}

fn csv(large_name: &str, e: Expansion, order: usize, rows: &[Row]) -> String {
    let mut out = format!("{large_name},a,b,c,z,order,asym_re,asym_im,ref_re,ref_im,rel_error,error\n");
    for r in rows {
        let (a, b, c) = params_of(e, &r.point);
        let head = format!(
            "{},{},{},{},{},{}",
            g17(r.point.large),
            complex_text(a),
            complex_text(b),
            complex_text(c),
            complex_text(r.point.z),
            order
        );
        let tail = match &r.outcome {
            Ok((approx, reference)) => format!(
                "{},{},{},{},{},",
                g17(approx.re),
                g17(approx.im),
                g17(reference.re),
                g17(reference.im),
                g17(rel_diff(*approx, *reference))
            ),
            Err(m) => format!(",,,,,\"{}\"", m.replace('"', "'")),
        };
        out.push_str(&format!("{head},{tail}\n"));
    }
    out
}

fn json_rows(large_name: &str, e: Expansion, order: usize, rows: &[Row]) -> String {
    let items: Vec<_> = rows
        .iter()
        .map(|r| {
            let (a, b, c) = params_of(e, &r.point);
            let mut v = json!({
                large_name: r.point.large,
                "a": complex_text(a),
                "b": complex_text(b),
                "c": complex_text(c),
                "z": complex_text(r.point.z),
                "order": order,
            });
            match &r.outcome {
                Ok((approx, reference)) => {
                    v["asym"] = json!({"re": approx.re, "im": approx.im});
                    v["reference"] = json!({"re": reference.re, "im": reference.im});
                    v["rel_error"] = json!(rel_diff(*approx, *reference));
                }
                Err(m) => v["error"] = json!(m),
            }
            v
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&items).expect("rows serialize");
    s.push('\n');
    s
}
