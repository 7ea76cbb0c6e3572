//! Property dossiers and ideal listings as JSON values.

use serde_json::{json, Map, Value};

use crate::action::PartialAction;
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::fn_algebra::InducedAction;
use crate::groupoid::Groupoid;
use crate::ideals;
use crate::io::Instance;
use crate::skew::SkewRing;
use crate::transformation::TransGroupoid;
use crate::ultragraph::Ultragraph;

const SKIPPED: &str = "skipped";

/// The value of a capped computation: its result, or `"skipped"` when over the cap.
fn capped<T: Into<Value>>(r: Result<T>) -> Result<Value> {
    match r {
        Ok(v) => Ok(v.into()),
        Err(Error::DimensionCap { .. }) => Ok(Value::from(SKIPPED)),
        Err(e) => Err(e),
    }
}

pub fn dossier(instance: &Instance, field: PrimeField, cap: usize) -> Result<Value> {
    match instance {
        Instance::Groupoid(g) => Ok(groupoid_dossier(g)),
        Instance::Action(a) => action_dossier(a, field, cap),
        Instance::Ultragraph(u) => Ok(ultragraph_dossier(u)),
    }
}

fn groupoid_dossier(g: &Groupoid) -> Value {
    let isotropy: Map<String, Value> = g
        .objects()
        .iter()
        .map(|o| (o.clone(), json!(g.isotropy_group(o).unwrap())))
        .collect();
    json!({
        "kind": "groupoid",
        "objects": g.num_objects(),
        "morphisms": g.num_morphisms(),
        "connected_components": g.object_orbits().len(),
        "isotropy": isotropy,
        "automorphisms": g.automorphisms().len(),
    })
}

fn ultragraph_dossier(u: &Ultragraph) -> Value {
    let loops: Map<String, Value> = u
        .condition_k_report()
        .into_iter()
        .map(|(v, c)| (v, serde_json::to_value(c).unwrap()))
        .collect();
    json!({
        "kind": "ultragraph",
        "vertices": u.vertices().len(),
        "edges": u.edges().len(),
        "sinks": u.vertex_names(u.sinks()),
        "condition_K": u.condition_k(),
        "simple_loops": loops,
    })
}

fn action_dossier(a: &PartialAction, field: PrimeField, cap: usize) -> Result<Value> {
    let ind = InducedAction::new(a.clone(), field);
    let ring = SkewRing::from_induced(ind.clone());
    let lattice = ideals::all_ideals(&ring, cap);
    let on_lattice = |f: &dyn Fn(&[ideals::TwoSidedIdeal]) -> Value| -> Result<Value> {
        match &lattice {
            Ok(l) => Ok(f(l)),
            Err(Error::DimensionCap { .. }) => Ok(Value::from(SKIPPED)),
            Err(e) => Err(e.clone()),
        }
    };
    let graded = ideals::graded_ideals_via_psi(&ring);
    let t = TransGroupoid::build(a)?;
    let orbits: Vec<Vec<String>> = a.orbits().into_iter().map(|o| a.subset_names(o)).collect();
    Ok(json!({
        "kind": "action",
        "field": field.p(),
        "points": a.num_points(),
        "morphisms": a.groupoid().num_morphisms(),
        "global": a.is_global(),
        "orbits": orbits,
        "invariant_subset_count": a.invariant_subsets().len(),
        "minimal": a.is_minimal(),
        "topologically_transitive": a.is_topologically_transitive(),
        "topologically_free": a.is_topologically_free(),
        "residually_topologically_free": a.is_residually_topologically_free(),
        "g_simple": ind.is_g_simple(),
        "g_prime": ind.is_g_prime(),
        "dimension": ring.dim(),
        "ideal_count": on_lattice(&|l| l.len().into())?,
        "graded_ideal_count": graded.len(),
        "simple": on_lattice(&|l| ideals::is_simple(&ring, l).into())?,
        "prime": on_lattice(&|l| ideals::is_prime(&ring, l).into())?,
        "graded_simple": ideals::is_graded_simple(&ring, &graded),
        "graded_prime": ideals::is_graded_prime(&ring, &graded),
        "intersection_property": on_lattice(&|l| ideals::has_intersection_property(&ring, l).into())?,
        "residual_intersection_property": capped(ideals::has_residual_intersection_property(&ring, cap))?,
        "a_maximal_commutative": ideals::is_a_maximal_commutative(&ring),
        "transformation_groupoid": {
            "arrows": t.num_arrows(),
            "units": t.num_units(),
            "effective": t.is_effective(),
            "strongly_effective": t.is_strongly_effective(),
            "minimal": t.is_minimal_groupoid(),
            "topologically_transitive": t.is_topologically_transitive_groupoid(),
        },
    }))
}

/// Every two-sided ideal with its dimension, gradedness and `Φ`-image support.
pub fn ideal_listing(a: &PartialAction, field: PrimeField, cap: usize) -> Result<Value> {
    let ring = SkewRing::new(a.clone(), field);
    let list = ideals::all_ideals(&ring, cap)?;
    let entries = list
        .iter()
        .map(|i| {
            let basis: Vec<String> = i
                .space()
                .rows()
                .iter()
                .map(|r| ring.element_to_json(&ring.from_vector(r)).to_string())
                .collect();
            Ok(json!({
                "dimension": i.dim(),
                "graded": ideals::is_graded_ideal(&ring, i),
                "phi_support": a.subset_names(ideals::phi(&ring, i)?),
                "basis": basis,
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(json!({
        "field": field.p(),
        "dimension": ring.dim(),
        "count": list.len(),
        "ideals": entries,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn act(a: PartialAction) -> Value {
        dossier(&Instance::Action(a), PrimeField::f2(), 14).unwrap()
    }

    #[test]
    fn fixture_dossiers() {
        let b = act(fixtures::fix_b());
        assert_eq!((b["minimal"].clone(), b["simple"].clone(), b["ideal_count"].clone()), (json!(true), json!(true), json!(2)));
        let a = act(fixtures::fix_a());
        assert_eq!((a["intersection_property"].clone(), a["ideal_count"].clone()), (json!(false), json!(3)));
        let u = dossier(&Instance::Ultragraph(fixtures::fix_u1()), PrimeField::f2(), 14).unwrap();
        assert_eq!(u["condition_K"], json!(false));
    }

    #[test]
    fn capped_entries() {
        let c = dossier(&Instance::Action(fixtures::fix_c()), PrimeField::f2(), 3).unwrap();
        assert_eq!(c["ideal_count"], json!("skipped"));
        assert_eq!(c["graded_ideal_count"], json!(4));
        assert!(ideal_listing(&fixtures::fix_c(), PrimeField::f2(), 3).is_err());
    }

    #[test]
    fn listing() {
        let l = ideal_listing(&fixtures::fix_a(), PrimeField::f2(), 14).unwrap();
        assert_eq!(l["count"], json!(3));
        let graded: Vec<bool> = l["ideals"].as_array().unwrap().iter().map(|i| i["graded"].as_bool().unwrap()).collect();
        assert_eq!(graded.iter().filter(|g| !**g).count(), 1);
    }
}
