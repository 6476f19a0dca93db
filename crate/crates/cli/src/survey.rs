//! Corpus survey: per-group orders, the radical computed both elementwise and
//! through the k-criterion, Fitting data for solvable groups, per-class
//! witness profiles, and the pair/nilpotency criteria where they apply.
//!
//! The report is fully determined by (corpus, k, seed, budgets); wall time is
//! reported on stderr only so identical runs serialize byte-identically.

use serde::Serialize;

use solrad_core::catalog::GroupSpec;
use solrad_core::criterion::{
    baer_suzuki_check, is_prime, min_witness, pair_test_prime_ge5, radical_by_criterion,
    CachedProperty, GroupPropertyCache,
};
use solrad_core::error::{Error, Result};
use solrad_core::group::{conjugacy_classes, DEFAULT_ENUMERATION_BOUND};
use solrad_core::height::fitting_profile;
use solrad_core::series::{fitting_subgroup, is_solvable, solvable_radical};

/// Baer–Suzuki pair scans are limited to groups of this order.
const BAER_SUZUKI_ORDER_BOUND: u64 = 2000;

#[derive(Serialize)]
pub struct SurveyReport {
    pub schema: u32,
    pub corpus: Vec<String>,
    pub k: usize,
    pub seed: u64,
    pub tuple_budget: u64,
    pub sample_budget: u64,
    pub groups: Vec<GroupReport>,
    pub theorem_violations: Vec<String>,
}

#[derive(Serialize)]
pub struct FittingData {
    pub height: u32,
    pub term_orders: Vec<u64>,
    pub sfit_order: u64,
    pub fitting_order: u64,
}

#[derive(Serialize)]
pub struct GroupReport {
    pub spec: String,
    pub degree: usize,
    pub order: u64,
    pub radical_order: u64,
    pub criterion_radical_order: Option<u64>,
    pub radical_agreement: bool,
    pub fitting: Option<FittingData>,
    pub classes: Vec<serde_json::Value>,
    pub pair_tests: Vec<serde_json::Value>,
    pub baer_suzuki: Vec<serde_json::Value>,
}

pub fn run_survey(
    specs: &[GroupSpec],
    k: usize,
    seed: u64,
    tuple_budget: u64,
    sample_budget: u64,
) -> Result<SurveyReport> {
    let mut groups = Vec::new();
    let mut violations: Vec<String> = Vec::new();
    for spec in specs {
        let group = spec.build()?;
        let solv_cache = GroupPropertyCache::new(CachedProperty::Solvable);
        let nilp_cache = GroupPropertyCache::new(CachedProperty::Nilpotent);
        let classes = conjugacy_classes(&group, DEFAULT_ENUMERATION_BOUND)?;

        let radical = solvable_radical(&group, DEFAULT_ENUMERATION_BOUND)?;
        let criterion_radical = match radical_by_criterion(
            &group,
            k,
            DEFAULT_ENUMERATION_BOUND,
            tuple_budget,
            sample_budget,
            seed,
        ) {
            Ok(r) => Some(r.order()),
            Err(Error::TheoremViolationSuspected(msg)) => {
                violations.push(format!("{spec}: {msg}"));
                None
            }
            Err(e) => return Err(e),
        };
        let radical_agreement = criterion_radical == Some(radical.order());

        let fitting = if is_solvable(&group) {
            let profile = fitting_profile(&group)?;
            let f = fitting_subgroup(&group, DEFAULT_ENUMERATION_BOUND)?;
            Some(FittingData {
                height: profile.height,
                term_orders: profile.terms.iter().map(|t| t.order()).collect(),
                sfit_order: profile.sfit.as_ref().map_or(1, |s| s.order()),
                fitting_order: f.order(),
            })
        } else {
            None
        };

        let mut class_profiles = Vec::new();
        for class in &classes {
            match min_witness(&group, class, tuple_budget, sample_budget, seed, &solv_cache) {
                Ok(profile) => class_profiles.push(profile.to_json()),
                Err(Error::TheoremViolationSuspected(msg)) => {
                    violations.push(format!("{spec}: {msg}"));
                }
                Err(e) => return Err(e),
            }
        }

        let mut pair_tests = Vec::new();
        for class in &classes {
            let order = class.representative().order();
            if is_prime(order) && order >= 5 {
                match pair_test_prime_ge5(&group, class, &solv_cache) {
                    Ok(report) => {
                        pair_tests.push(serde_json::to_value(&report).expect("serializes"))
                    }
                    Err(Error::TheoremViolationSuspected(msg)) => {
                        violations.push(format!("{spec}: {msg}"));
                    }
                    Err(e) => return Err(e),
                }
            }
        }

        let mut baer_suzuki = Vec::new();
        if group.order() <= BAER_SUZUKI_ORDER_BOUND {
            for class in &classes {
                if is_prime(class.representative().order()) {
                    match baer_suzuki_check(&group, class.representative(), &nilp_cache) {
                        Ok(report) => {
                            baer_suzuki.push(serde_json::to_value(&report).expect("serializes"))
                        }
                        Err(Error::TheoremViolationSuspected(msg)) => {
                            violations.push(format!("{spec}: {msg}"));
                        }
                        Err(e) => return Err(e),
                    }
                }
            }
        }

        groups.push(GroupReport {
            spec: spec.to_string(),
            degree: group.degree(),
            order: group.order(),
            radical_order: radical.order(),
            criterion_radical_order: criterion_radical,
            radical_agreement,
            fitting,
            classes: class_profiles,
            pair_tests,
            baer_suzuki,
        });
    }
    Ok(SurveyReport {
        schema: 1,
        corpus: specs.iter().map(|s| s.to_string()).collect(),
        k,
        seed,
        tuple_budget,
        sample_budget,
        groups,
        theorem_violations: violations,
    })
}
