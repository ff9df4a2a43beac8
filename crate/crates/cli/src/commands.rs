use std::fs;
use std::path::Path;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use opcat::catconstruct::{
    cardinality, compose2, compose3, source_of2, target_of3, validate2, CCat, ForgetMiddle, ThreeLevelTree, TwCat,
    TwoLevelTree, UCat,
};
use opcat::category::{Category, Opposite, Truncation};
use opcat::cobordism::{factor_via_gos, phi, CobCat, Cobordism, CsCat, Boundary};
use opcat::finsetcats::{FinKind, FinMapJson, FinSetCat, GosCat, GradedSurjection};
use opcat::functortests::{is_discrete_opfibration, FnFunctor, LiftReport};
use opcat::graphcats::{d_objects, normalize_d, normalize_dfs, normalize_dprime, normalize_z, GraphCOp, Listed};
use opcat::grobnerkit::{check_admissible, lift_faithful, AdmissibilityReport, GosOrder, OsOpOrder};
use opcat::halfedge::{canonical_form, GenusGraph};
use opcat::modulelab::examples::{omega_counterexample, surface_counterexample};
use opcat::modulelab::nerve::{project, z2_hint, NerveCat, PositiveIntegers, Semigroup, TableSemigroup};
use opcat::modulelab::GrowthReport;
use opcat::noetherprobe::colors::{color_bound, color_violations, greedy_coloring, ColoredGraph};
use opcat::noetherprobe::{
    antichain_search, banana_sequence, comparability_table, comparable_pair, gos_hint, leq, random_d_morphism,
    random_gos_op, tree_hint,
};
use opcat::operads::{EnumerableOperad, FreeOperad, GraphFamily, GraphOperad, Operad, TableFamily, TableOperad};

use crate::{Cli, CliError, Command, Format, View};

type Res<T> = Result<T, CliError>;

fn parse_err(e: impl std::fmt::Display) -> CliError {
    CliError::Parse(e.to_string())
}

fn read_json(path: &Path) -> Res<Value> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn decode<T: DeserializeOwned>(v: Value) -> Res<T> {
    serde_json::from_value(v).map_err(parse_err)
}

fn encode<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

/// Rendered output in the requested format; `csv` and `dot` are optional
/// per command.
struct Out {
    json: Value,
    csv: Option<String>,
    dot: Option<String>,
}

impl Out {
    fn json(json: Value) -> Self {
        Self {
            json,
            csv: None,
            dot: None,
        }
    }

    fn render(self, format: Format) -> Res<String> {
        match format {
            Format::Json => Ok(serde_json::to_string_pretty(&self.json).expect("serializable")),
            Format::Csv => self.csv.ok_or_else(|| CliError::Parse("csv output is not available for this command".into())),
            Format::Dot => self.dot.ok_or_else(|| CliError::Parse("dot output is not available for this command".into())),
        }
    }
}

pub fn run(cli: &Cli) -> Res<String> {
    let out = match &cli.command {
        Command::Compose {
            view,
            operad,
            signature,
            first,
            second,
        } => compose(*view, operad, signature.as_deref(), &read_json(first)?, &read_json(second)?)?,
        Command::Enumerate { view, operad, bound } => enumerate(*view, operad, *bound)?,
        Command::Canonicalize {
            form,
            start_leaf,
            constant_nine,
            input,
        } => canonicalize(form, *start_leaf, *constant_nine, read_json(input)?)?,
        Command::CheckOrder { order, size, grading } => check_order(order, *size, *grading)?,
        Command::ProbeG2 {
            category,
            sequences,
            length,
            bound,
        } => probe_g2(category, *sequences, *length, *bound, cli.seed)?,
        Command::Antichain { size } => antichain(*size),
        Command::CheckFunctor { functor, bound, grading } => check_functor(functor, *bound, *grading)?,
        Command::Counterexample { which, kmax, genus } => counterexample(which, *kmax, *genus)?,
        Command::Cobordism { op, inputs } => cobordism(op, inputs)?,
        Command::Nerve {
            semigroup,
            object,
            morphisms,
            bound,
        } => nerve(semigroup, object, *morphisms, *bound, cli.seed)?,
    };
    out.render(cli.format)
}

// ---------------------------------------------------------------------------
// compose / enumerate

fn table_family(name: &str) -> Option<TableFamily> {
    [TableFamily::UCom, TableFamily::Com, TableFamily::UAs, TableFamily::As]
        .into_iter()
        .find(|f| f.name() == name)
}

fn graph_family(name: &str) -> Option<GraphFamily> {
    match name {
        "pOp" => Some(GraphFamily::POp),
        "sOp" => Some(GraphFamily::SOp),
        "cOp" => Some(GraphFamily::COp),
        "mOp" => Some(GraphFamily::MOp),
        "mOpGenus" | "mOp_(g,n)" => Some(GraphFamily::MOpGenus),
        _ => None,
    }
}

fn compose(view: View, operad: &str, signature: Option<&Path>, a: &Value, b: &Value) -> Res<Out> {
    if let Some(f) = table_family(operad) {
        return compose_in(&TableOperad::new(f), view, a, b);
    }
    if let Some(f) = graph_family(operad) {
        return compose_in(&GraphOperad::new(f), view, a, b);
    }
    if operad == "free" {
        let path = signature.ok_or_else(|| CliError::Parse("the free operad needs --signature".into()))?;
        let gens: std::collections::BTreeMap<String, usize> = decode(read_json(path)?)?;
        return compose_in(&FreeOperad { generators: gens }, view, a, b);
    }
    Err(CliError::Parse(format!("unknown operad {operad}")))
}

fn compose_in<O>(op: &O, view: View, a: &Value, b: &Value) -> Res<Out>
where
    O: Operad,
    O::Op: Serialize + DeserializeOwned,
{
    match view {
        View::C => {
            let f: TwoLevelTree<O::Op> = decode(a.clone())?;
            let g: TwoLevelTree<O::Op> = decode(b.clone())?;
            validate2(op, &f).map_err(parse_err)?;
            validate2(op, &g).map_err(parse_err)?;
            let fg = compose2(op, &f, &g).map_err(parse_err)?;
            let source = source_of2(op, &fg).map_err(parse_err)?;
            Ok(Out::json(json!({ "composite": encode(&fg), "source": encode(&source) })))
        }
        View::Tw | View::U => {
            let g: ThreeLevelTree<O::Op> = decode(a.clone())?;
            let f: ThreeLevelTree<O::Op> = decode(b.clone())?;
            let gf = compose3(op, &g, &f).map_err(parse_err)?;
            let target = target_of3(op, &gf).map_err(parse_err)?;
            Ok(Out::json(json!({ "composite": encode(&gf), "target": encode(&target) })))
        }
    }
}

fn hom_table<C>(cat: &C) -> Out
where
    C: Truncation,
    C::Obj: Serialize,
{
    let objects = cat.objects();
    let mut rows = Vec::new();
    let mut csv = String::from("source,target,count\n");
    for a in &objects {
        for b in &objects {
            let n = cat.hom(a, b).len();
            let (sa, sb) = (encode(a), encode(b));
            csv.push_str(&format!("\"{sa}\",\"{sb}\",{n}\n"));
            rows.push(json!({ "source": sa, "target": sb, "count": n }));
        }
    }
    Out {
        json: Value::Array(rows),
        csv: Some(csv),
        dot: None,
    }
}

fn enumerate(view: View, operad: &str, bound: usize) -> Res<Out> {
    let family = table_family(operad).ok_or_else(|| CliError::Parse(format!("enumerate supports table operads, not {operad}")))?;
    if bound > 5 {
        return Err(CliError::Bound(format!("arity bound {bound} exceeds 5")));
    }
    let op = TableOperad::new(family);
    Ok(match view {
        View::C => hom_table(&CCat { operad: op, max_arity: bound }),
        View::Tw => hom_table(&TwCat::new(op, bound)),
        View::U => hom_table(&UCat {
            operad: op,
            max_arity: bound,
            prop_only: false,
        }),
    })
}

// ---------------------------------------------------------------------------
// canonicalize

fn canonicalize(form: &str, start_leaf: usize, constant: u32, input: Value) -> Res<Out> {
    let g: GenusGraph = decode(input)?;
    let normal = match form {
        "canonical" => canonical_form(&g).0,
        "dfs" => normalize_dfs(&GraphOperad::new(GraphFamily::MOpGenus), &g).map_err(parse_err)?.0,
        "d" => normalize_d(&g).map_err(parse_err)?.0,
        "dprime" => normalize_dprime(&g).map_err(parse_err)?.0,
        "z" => normalize_z(&g, start_leaf).map_err(parse_err)?,
        _ => return Err(CliError::Parse(format!("unknown form {form}"))),
    };
    let col = greedy_coloring(&normal);
    let violations = color_violations(
        &ColoredGraph {
            graph: normal.clone(),
            col: col.clone(),
        },
        constant,
    );
    Ok(Out {
        json: json!({
            "graph": encode(&normal),
            "coloring": col,
            "color_bound": color_bound(&normal, constant),
            "coloring_valid": violations.is_empty(),
        }),
        csv: None,
        dot: Some(normal.to_dot()),
    })
}

// ---------------------------------------------------------------------------
// orders

fn order_out<M>(rep: &AdmissibilityReport<M>, enc: impl Fn(&M) -> Value) -> Out {
    let violations: Vec<Value> = rep.violations.iter().map(|(a, b, c)| json!([enc(a), enc(b), enc(c)])).collect();
    Out {
        json: json!({
            "checked": rep.checked,
            "ties": rep.ties.len(),
            "violations": violations,
        }),
        csv: Some(format!("checked,ties,violations\n{},{},{}\n", rep.checked, rep.ties.len(), rep.violations.len())),
        dot: None,
    }
}

fn gos_json(f: &GradedSurjection) -> Value {
    encode(&f.to_json())
}

fn check_order(order: &str, size: usize, grading: u32) -> Res<Out> {
    match order {
        "os" => {
            if size > 5 {
                return Err(CliError::Bound(format!("size {size} exceeds 5")));
            }
            let cat = Opposite(FinSetCat::new(FinKind::OS, size));
            let ms = cat.all_morphisms();
            Ok(order_out(&check_admissible(&cat, &OsOpOrder, &ms), encode))
        }
        "gos" => {
            if size > 4 || grading > 3 {
                return Err(CliError::Bound("gos checks allow size ≤ 4 and grading ≤ 3".into()));
            }
            let cat = Opposite(GosCat {
                max_size: size,
                max_grading: grading,
            });
            let ms = cat.all_morphisms();
            Ok(order_out(&check_admissible(&cat, &GosOrder, &ms), gos_json))
        }
        "d" => {
            if size > 4 {
                return Err(CliError::Bound(format!("vertex bound {size} exceeds 4")));
            }
            let cat = Listed {
                cat: GraphCOp {
                    operad: GraphOperad::new(GraphFamily::POp),
                },
                objects: (1..=size).flat_map(|v| d_objects(2, v)).collect(),
            };
            let ms = cat.all_morphisms();
            let order = lift_faithful(&cat, &ms, OsOpOrder, cardinality).map_err(|e| CliError::Internal(e.to_string()))?;
            Ok(order_out(&check_admissible(&cat, &order, &ms), |f| encode(&cardinality(f))))
        }
        "nerve" => {
            if size > 5 {
                return Err(CliError::Bound(format!("length {size} exceeds 5")));
            }
            let cat = NerveCat {
                semigroup: TableSemigroup::cyclic(2),
                max_len: size,
            };
            let ms = cat.all_morphisms();
            let order = lift_faithful(&cat, &ms, OsOpOrder, project).map_err(|e| CliError::Internal(e.to_string()))?;
            Ok(order_out(&check_admissible(&cat, &order, &ms), encode))
        }
        _ => Err(CliError::Parse(format!("unknown order {order}"))),
    }
}

// ---------------------------------------------------------------------------
// probes

fn probe_rows<C: Category>(cat: &C, seqs: &[Vec<C::Mor>], hint: &dyn Fn(&C::Mor, &C::Mor) -> bool) -> Res<Out> {
    let mut rows = Vec::new();
    let mut csv = String::from("sequence,i,j,certified\n");
    for (k, seq) in seqs.iter().enumerate() {
        match comparable_pair(cat, seq, hint) {
            Ok(c) => {
                let certified = leq(cat, &seq[c.i], &seq[c.j]).is_some()
                    && cat.compose(&c.witness, &seq[c.i]).as_ref() == Ok(&seq[c.j]);
                if !certified {
                    return Err(CliError::Internal(format!("witness for sequence {k} does not certify")));
                }
                csv.push_str(&format!("{k},{},{},true\n", c.i, c.j));
                rows.push(json!({ "sequence": k, "i": c.i, "j": c.j, "certified": true }));
            }
            Err(e) => {
                csv.push_str(&format!("{k},,,false\n"));
                rows.push(json!({ "sequence": k, "found": false, "reason": e.to_string() }));
            }
        }
    }
    Ok(Out {
        json: Value::Array(rows),
        csv: Some(csv),
        dot: None,
    })
}

fn probe_g2(category: &str, sequences: usize, length: usize, bound: usize, seed: u64) -> Res<Out> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match category {
        "d" => {
            if bound > 8 {
                return Err(CliError::Bound(format!("target bound {bound} exceeds 8")));
            }
            let cat = GraphCOp {
                operad: GraphOperad::new(GraphFamily::POp),
            };
            let p = d_objects(2, 1)[0].clone();
            let seqs: Vec<Vec<_>> = (0..sequences)
                .map(|_| (0..length).map(|_| random_d_morphism(&mut rng, &p, bound)).collect())
                .collect();
            probe_rows(&cat, &seqs, &tree_hint)
        }
        "gos" => {
            let grading = u32::try_from(bound).map_err(|e| CliError::Bound(e.to_string()))?;
            let cat = Opposite(GosCat {
                max_size: 5,
                max_grading: grading,
            });
            let seqs: Vec<Vec<_>> = (0..sequences)
                .map(|_| (0..length).map(|_| random_gos_op(&mut rng, 2, 5, grading)).collect())
                .collect();
            probe_rows(&cat, &seqs, &gos_hint)
        }
        "z2" => {
            let cat = NerveCat {
                semigroup: TableSemigroup::cyclic(2),
                max_len: usize::MAX,
            };
            let x = vec![1, 0, 1];
            let seqs: Vec<Vec<_>> = (0..sequences)
                .map(|_| (0..length).map(|_| cat.random_from(&mut rng, &x, bound.max(1))).collect())
                .collect();
            probe_rows(&cat, &seqs, &z2_hint)
        }
        _ => Err(CliError::Parse(format!("unknown category {category}"))),
    }
}

fn antichain(size: usize) -> Out {
    let cat = GraphCOp {
        operad: GraphOperad::new(GraphFamily::MOp),
    };
    let seq = banana_sequence(1..=size);
    let found = antichain_search(&cat, &seq, size);
    let comparable = comparability_table(&cat, &seq).values().filter(|&&b| b).count();
    Out {
        json: json!({ "antichain": found, "comparable_pairs": comparable }),
        csv: Some(format!("size,found,comparable_pairs\n{size},{},{comparable}\n", found.is_some())),
        dot: None,
    }
}

// ---------------------------------------------------------------------------
// functors

fn lift_out<O: std::fmt::Debug, M: std::fmt::Debug>(rep: &LiftReport<O, M>) -> Out {
    let examples: Vec<String> = rep
        .violations
        .iter()
        .take(5)
        .map(|v| format!("{:?} --{:?}--> lifts: {}", v.object, v.morphism, v.lifts))
        .collect();
    Out {
        json: json!({
            "checked": rep.checked,
            "violations": rep.violations.len(),
            "examples": examples,
        }),
        csv: Some(format!("checked,violations\n{},{}\n", rep.checked, rep.violations.len())),
        dot: None,
    }
}

fn check_functor(functor: &str, bound: usize, grading: u32) -> Res<Out> {
    match functor {
        "tw-u-ucom" | "tw-u-uas" => {
            if bound > 4 {
                return Err(CliError::Bound(format!("arity bound {bound} exceeds 4")));
            }
            let family = if functor == "tw-u-ucom" { TableFamily::UCom } else { TableFamily::UAs };
            let op = TableOperad::new(family);
            let tw = TwCat::new(op, bound);
            let u = UCat {
                operad: op,
                max_arity: bound,
                prop_only: false,
            };
            Ok(lift_out(&is_discrete_opfibration(&tw, &u, &ForgetMiddle(op), &|c| tw.homs_from(c))))
        }
        "cs-cob" => {
            if bound > 3 || grading > 2 {
                return Err(CliError::Bound("cs-cob allows boundaries ≤ 3 and genus ≤ 2".into()));
            }
            let small = CsCat {
                nc: true,
                max_boundary: bound,
                max_genus: grading,
            };
            let wide = CsCat {
                max_genus: grading + bound as u32 * (grading + 1),
                ..small
            };
            let base: CobCat = small.base();
            Ok(lift_out(&is_discrete_opfibration(&small, &base, &Boundary, &|c| wide.homs_from(c))))
        }
        "cpop-fs" => {
            if bound > 3 {
                return Err(CliError::Bound(format!("vertex bound {bound} exceeds 3")));
            }
            let op = GraphOperad::new(GraphFamily::POp);
            let objects: Vec<GenusGraph> = (1..=bound).flat_map(|v| op.operations(&(3, 0), v)).collect();
            let c = Listed {
                cat: GraphCOp { operad: op },
                objects,
            };
            let d = Opposite(FinSetCat::new(FinKind::FS, bound));
            let card = FnFunctor {
                obj: |x: &GenusGraph| x.vertex_count(),
                mor: |f: &TwoLevelTree<GenusGraph>| cardinality(f),
            };
            Ok(lift_out(&is_discrete_opfibration(&c, &d, &card, &|x| c.homs_from(x))))
        }
        _ => Err(CliError::Parse(format!("unknown functor {functor}"))),
    }
}

// ---------------------------------------------------------------------------
// modules

fn growth_out(rep: &GrowthReport, extra: Value) -> Out {
    Out {
        json: json!({ "growth": encode(rep), "summary": extra, "total": rep.total() }),
        csv: Some(rep.to_csv()),
        dot: None,
    }
}

fn counterexample(which: &str, kmax: usize, genus: u32) -> Res<Out> {
    match which {
        "omega" => {
            if !(3..=7).contains(&kmax) {
                return Err(CliError::Bound(format!("kmax {kmax} outside 3..=7")));
            }
            let rep = omega_counterexample(kmax);
            if !rep.growth.closed {
                return Err(CliError::Internal("generated submodule left N".into()));
            }
            Ok(growth_out(&rep.growth, json!({ "at_p": rep.at_p, "objects": rep.objects })))
        }
        "cs" => {
            if genus > 6 {
                return Err(CliError::Bound(format!("genus {genus} exceeds 6")));
            }
            let rep = surface_counterexample(genus);
            Ok(growth_out(
                &rep.growth,
                json!({ "closed": rep.closed, "hemisphere_generates": rep.hemisphere_generates }),
            ))
        }
        _ => Err(CliError::Parse(format!("unknown counterexample {which}"))),
    }
}

fn read_gos(path: &Path) -> Res<GradedSurjection> {
    let j: FinMapJson = decode(read_json(path)?)?;
    GradedSurjection::from_json(&j).map_err(parse_err)
}

fn read_cob(path: &Path) -> Res<Cobordism> {
    Cobordism::from_json(&read_json(path)?).map_err(parse_err)
}

fn cobordism(op: &str, inputs: &[std::path::PathBuf]) -> Res<Out> {
    let need = |k: usize| {
        if inputs.len() == k {
            Ok(())
        } else {
            Err(CliError::Parse(format!("{op} takes {k} input file(s)")))
        }
    };
    match op {
        "compose" => {
            need(2)?;
            let (h, f) = (read_cob(&inputs[0])?, read_cob(&inputs[1])?);
            let hf = Cobordism::compose(&h, &f).map_err(parse_err)?;
            if hf.euler() != h.euler() + f.euler() {
                return Err(CliError::Internal("euler characteristic is not additive".into()));
            }
            Ok(Out::json(hf.to_json()))
        }
        "phi" => {
            need(1)?;
            Ok(Out::json(phi(&read_gos(&inputs[0])?).to_json()))
        }
        "factor" => {
            need(1)?;
            let f = read_cob(&inputs[0])?;
            let fac = factor_via_gos(&f).map_err(parse_err)?;
            let back = Cobordism::compose(&phi(&fac.graded), &fac.splitter).map_err(|e| CliError::Internal(e.to_string()))?;
            if back != f {
                return Err(CliError::Internal("factorization does not recompose".into()));
            }
            Ok(Out::json(json!({ "splitter": fac.splitter.to_json(), "graded": gos_json(&fac.graded) })))
        }
        _ => Err(CliError::Parse(format!("unknown cobordism operation {op}"))),
    }
}

// ---------------------------------------------------------------------------
// nerves

fn nerve(semigroup: &str, object: &str, morphisms: usize, bound: usize, seed: u64) -> Res<Out> {
    let x: Vec<usize> = object
        .split(',')
        .map(|s| s.trim().parse::<usize>().map_err(parse_err))
        .collect::<Res<_>>()?;
    if bound == 0 {
        return Err(CliError::Bound("block bound must be positive".into()));
    }
    let (kind, n) = match semigroup.split_once(':') {
        Some((k, n)) => (k, n.parse::<usize>().map_err(parse_err)?),
        None => (semigroup, 0),
    };
    match kind {
        "z2" => nerve_in(TableSemigroup::cyclic(2), &x, morphisms, bound, seed, true),
        "trivial" => nerve_in(TableSemigroup::trivial(), &x, morphisms, bound, seed, false),
        "cyclic" if n > 0 => nerve_in(TableSemigroup::cyclic(n), &x, morphisms, bound, seed, false),
        "positive" if n > 0 => nerve_in(PositiveIntegers { max_element: n }, &x, morphisms, bound, seed, false),
        _ => Err(CliError::Parse(format!("unknown semigroup {semigroup}"))),
    }
}

fn nerve_in<S: Semigroup>(s: S, x: &[usize], count: usize, bound: usize, seed: u64, z2: bool) -> Res<Out> {
    let els = s.elements();
    if x.is_empty() || x.iter().any(|e| !els.contains(e)) {
        return Err(CliError::Parse("object must be a nonempty sequence of semigroup elements".into()));
    }
    let cat = NerveCat {
        semigroup: s,
        max_len: usize::MAX,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seq: Vec<_> = (0..count).map(|_| cat.random_from(&mut rng, x, bound)).collect();
    let hint: &dyn Fn(&_, &_) -> bool = if z2 { &z2_hint } else { &|_, _| true };
    let pair = comparable_pair(&cat, &seq, hint).ok();
    Ok(Out::json(json!({
        "object": x,
        "morphisms": encode(&seq),
        "pair": pair.map(|c| json!({ "i": c.i, "j": c.j, "witness": encode(&c.witness) })),
    })))
}
