//! Subcommand implementations. Each returns the table to emit.

use crate::args::{BranchArg, FlowArgs, ImmerseArgs, LawsArgs, MethodArg, MetricArgs, RelationArg, TriangulateArgs};
use crate::config::RunConfig;
use crate::output::Table;
use crate::CliError;
use geoflow::curved_trig::{c_expand, law_c, law_sc, sc_expand, Branch, ExpansionInputs};
use geoflow::embeddings::{lambert_relation, ArclengthRelation, Flat, ProfileCache};
use geoflow::fnc::{gauss_from_metric, metric_from_solution_with, MetricMethod};
use geoflow::fundamental_solution::{fundamental_solution, geodesic_sample};
use geoflow::triangulation::{delta_residual, triangulate, triangulate_detailed};
use std::f64::consts::TAU;

pub fn laws(cfg: &RunConfig, args: &LawsArgs) -> Result<Table, CliError> {
    let (k, g, a, b) = (args.k, args.gamma, cfg.a, args.b);
    let branch = match args.branch {
        BranchArg::Principal => Branch::Principal,
        BranchArg::Side => Branch::Side,
    };
    let c = law_c(k, g, a, b)?;
    let alpha = law_sc(k, g, a, b, branch)?;
    let c_flat = law_c(0.0, g, a, b)?;
    let mut t = Table::new(&["quantity", "value"]);
    let mut row = |name: &str, v: f64| t.push(vec![name.into(), v.into()]);
    row("c", c);
    row("alpha", alpha);
    row("c_flat", c_flat);
    row("c_minus_flat", c - c_flat);
    // coefficients in the scale ε for sides (aε, bε)
    let inp = ExpansionInputs::first_order(k, g, a, b);
    for (i, v) in c_expand(&inp)?.iter().enumerate() {
        row(["c_1", "c_2", "c_3"][i], *v);
    }
    for (i, v) in sc_expand(&inp)?.iter().enumerate() {
        row(["alpha_0", "alpha_1", "alpha_2"][i], *v);
    }
    Ok(t)
}

pub fn flow(cfg: &RunConfig, args: &FlowArgs) -> Result<Table, CliError> {
    let field = cfg.build_field()?;
    let quad = cfg.quadrature();
    let bases = args.base_ls.as_ref().map(|l| l.0.clone()).unwrap_or_else(|| vec![cfg.base_l]);
    let mut t = Table::new(&["base_l", "base_phi", "beta", "lambda", "l", "phi", "x", "y"]);
    t.note("field", field.name().as_str());
    for &l_p in &bases {
        for &beta in &args.betas.0 {
            for &lambda in &args.lambdas.0 {
                let (l, phi) = geodesic_sample(&*field, (l_p, cfg.base_phi), beta, lambda, &quad, cfg.allow_unsafe_beta)?;
                let (s, c) = phi.sin_cos();
                t.push(vec![l_p.into(), cfg.base_phi.into(), beta.into(), lambda.into(), l.into(), phi.into(), (l * c).into(), (l * s).into()]);
            }
        }
    }
    Ok(t)
}

pub fn triangulate_cmd(cfg: &RunConfig, args: &TriangulateArgs) -> Result<Table, CliError> {
    let field = cfg.build_field()?;
    let spec = cfg.spec();
    let limit = fundamental_solution(&*field, &spec, &cfg.quadrature(), false)?.second_order();
    let names = ["b2", "gamma2", "alpha2"];
    if let Some(ns) = &args.convergence {
        let mut t = Table::new(&["n", "b2", "gamma2", "alpha2", "err_b2", "err_gamma2", "err_alpha2"]);
        for (name, v) in names.iter().zip(limit) {
            t.note(format!("limit_{name}"), v);
        }
        let mut prev: Option<[f64; 3]> = None;
        for &n in &ns.0 {
            let r = triangulate(&*field, &spec, n)?.second_order();
            let e = [0, 1, 2].map(|k| (r[k] - limit[k]).abs());
            if let Some(p) = prev {
                for k in 0..3 {
                    t.note(format!("order_{}_n{n}", names[k]), (p[k] / e[k]).log2());
                }
            }
            prev = Some(e);
            t.push(vec![n.into(), r[0].into(), r[1].into(), r[2].into(), e[0].into(), e[1].into(), e[2].into()]);
        }
        return Ok(t);
    }
    let tri = triangulate_detailed(&*field, &spec, cfg.n)?;
    let finite = tri.result.second_order();
    let mut t = Table::new(&["slice", "index", "kind", "l0", "phi0", "l1", "phi1"]);
    t.note("n", cfg.n);
    for k in 0..3 {
        t.note(format!("finite_{}", names[k]), finite[k]);
        t.note(format!("limit_{}", names[k]), limit[k]);
        t.note(format!("diff_{}", names[k]), finite[k] - limit[k]);
    }
    let mut residual: f64 = 0.0;
    for s in &tri.slices {
        for i in 2..cfg.n {
            residual = residual.max(delta_residual(cfg.n, s.j, i, s)?.abs());
        }
    }
    t.note("max_delta_residual", residual);
    let geom = tri.geometry();
    let worst = geom.checks.iter().filter(|c| c.bound > 0.0).fold(0.0f64, |m, c| m.max(c.mismatch / c.bound));
    t.note("max_mismatch_over_bound", worst);
    t.note("closure", if geom.checks.iter().all(|c| c.passes()) { "pass" } else { "fail" });
    for s in &geom.segments {
        t.push(vec![s.slice.into(), s.index.into(), s.kind.as_str().into(), s.from.l.into(), s.from.phi.into(), s.to.l.into(), s.to.phi.into()]);
    }
    Ok(t)
}

pub fn metric(cfg: &RunConfig, args: &MetricArgs) -> Result<Table, CliError> {
    let field = cfg.build_field()?;
    let quad = cfg.quadrature();
    let method = match args.method {
        MethodArg::Step => MetricMethod::StepField,
        MethodArg::Fd => MetricMethod::SecondOrderFd,
    };
    let phi = cfg.base_phi;
    let g = |l: f64| Ok(metric_from_solution_with(&*field, (l, phi), &quad, method)?.g_phiphi);
    let mut t = Table::new(&["l", "phi", "g_ll", "g_phiphi", "k_reconstructed", "k_field"]);
    t.note("field", field.name().as_str());
    for &l in &args.ls.0 {
        let m = metric_from_solution_with(&*field, (l, phi), &quad, method)?;
        let k = gauss_from_metric(g, l)?;
        t.push(vec![l.into(), phi.into(), m.g_ll.into(), m.g_phiphi.into(), k.into(), field.try_eval(l, phi)?.into()]);
    }
    Ok(t)
}

pub fn immerse(cfg: &RunConfig, args: &ImmerseArgs) -> Result<Table, CliError> {
    if args.nr == 0 || args.nphi == 0 {
        return Err(CliError::Input("--nr and --nphi must be positive".into()));
    }
    let lambert = lambert_relation();
    let rel: &dyn ArclengthRelation = match args.relation {
        RelationArg::Lambert => &lambert,
        RelationArg::Flat => &Flat,
    };
    let cache = ProfileCache::new(rel, args.r_max, args.nodes, &cfg.quadrature())?;
    let mut t = Table::new(&["r", "phi", "l", "x", "y", "z"]);
    t.note("relation", rel.name().as_str());
    for i in 0..=args.nr {
        let r = args.r_max * i as f64 / args.nr as f64;
        for k in 0..args.nphi {
            let phi = TAU * k as f64 / args.nphi as f64;
            let p = cache.immerse(r, phi)?;
            t.push(vec![r.into(), phi.into(), rel.l_of_r(r).into(), p[0].into(), p[1].into(), p[2].into()]);
        }
    }
    Ok(t)
}
