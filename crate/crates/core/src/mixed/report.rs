//! The result record of a mixed Newton number computation.

use num_traits::{Signed, Zero};
use serde_json::{json, Map, Value};

use crate::{rat, rat_string, Rat};

use super::MixedCovolumeTable;

/// Everything a run produces: the number itself, the Milnor-number reading
/// when it is a non-negative integer, and the full evidence (per-subset
/// contributions, convenience flags, extension exponent, stabilization
/// trace, mixed covolume tables).
#[derive(Debug, Clone)]
pub struct NewtonNumberReport {
    pub n: usize,
    pub p: usize,
    pub nu: Rat,
    /// Present exactly when `nu` is a non-negative integer.
    pub mu: Option<u64>,
    /// Signed contribution of each coordinate subset (1-based indices,
    /// ordered by size then lexicographically).
    pub per_subset: Vec<(Vec<usize>, Rat)>,
    /// Per-component convenience of the input.
    pub convenient: Vec<bool>,
    /// Extension exponent the value was accepted at; absent when the input
    /// needed no extension.
    pub extension_used: Option<u64>,
    /// `(N, ν(N))` pairs in evaluation order; empty for plain convenient runs.
    pub stabilization_trace: Vec<(u64, Rat)>,
    /// `(-1)^{n-p+1}`.
    pub constant_term: i64,
    pub warnings: Vec<String>,
    /// Mixed covolume tables per subset, for verbose inspection.
    pub tables: Vec<(Vec<usize>, MixedCovolumeTable)>,
}

impl NewtonNumberReport {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn assemble(
        n: usize,
        p: usize,
        nu: Rat,
        per_subset: Vec<(Vec<usize>, Rat)>,
        convenient: Vec<bool>,
        extension_used: Option<u64>,
        stabilization_trace: Vec<(u64, Rat)>,
        constant_term: i64,
        tables: Vec<(Vec<usize>, MixedCovolumeTable)>,
    ) -> Self {
        let mu = integral_mu(&nu);
        Self {
            n,
            p,
            nu,
            mu,
            per_subset,
            convenient,
            extension_used,
            stabilization_trace,
            constant_term,
            warnings: Vec::new(),
            tables,
        }
    }

    /// Attach stabilization evidence, replacing the convenience flags with
    /// those of the original (unextended) input.
    pub(crate) fn with_stabilization(
        mut self,
        convenient: Vec<bool>,
        extension_used: Option<u64>,
        trace: Vec<(u64, Rat)>,
    ) -> Self {
        self.convenient = convenient;
        self.extension_used = extension_used;
        self.stabilization_trace = trace;
        self
    }

    /// `nu == Σ per-subset contributions + constant term`.
    pub fn is_consistent(&self) -> bool {
        let total: Rat =
            self.per_subset.iter().map(|(_, c)| c.clone()).sum::<Rat>() + rat(self.constant_term);
        total == self.nu
    }

    /// The canonical JSON report. Rationals are exact decimal strings
    /// (`"a"` or `"a/b"`), subsets are comma-joined sorted 1-based indices,
    /// and the map ordering is deterministic, so identical inputs produce
    /// byte-identical documents.
    pub fn to_json(&self, mode: &str) -> Value {
        let mut per_subset = Map::new();
        for (subset, contribution) in &self.per_subset {
            per_subset.insert(subset_key(subset), json!(rat_string(contribution)));
        }
        let mut doc = Map::new();
        doc.insert("n".into(), json!(self.n));
        doc.insert("p".into(), json!(self.p));
        doc.insert("mode".into(), json!(mode));
        doc.insert("nu".into(), json!(rat_string(&self.nu)));
        if let Some(mu) = self.mu {
            doc.insert("mu".into(), json!(mu));
        }
        doc.insert("convenient".into(), json!(self.convenient));
        if let Some(next) = self.extension_used {
            doc.insert("extension_used".into(), json!(next));
        }
        if !self.stabilization_trace.is_empty() {
            let trace: Vec<Value> = self
                .stabilization_trace
                .iter()
                .map(|(n, v)| json!([n, rat_string(v)]))
                .collect();
            doc.insert("stabilization_trace".into(), json!(trace));
        }
        doc.insert("per_subset".into(), Value::Object(per_subset));
        doc.insert("constant_term".into(), json!(self.constant_term));
        doc.insert("warnings".into(), json!(self.warnings));
        Value::Object(doc)
    }
}

fn subset_key(subset: &[usize]) -> String {
    subset
        .iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn integral_mu(nu: &Rat) -> Option<u64> {
    use num_traits::One;
    if nu.denom().is_one() && !nu.is_negative() {
        u64::try_from(nu.numer()).ok()
    } else {
        None
    }
}

impl Default for NewtonNumberReport {
    fn default() -> Self {
        Self {
            n: 0,
            p: 0,
            nu: Rat::zero(),
            mu: None,
            per_subset: Vec::new(),
            convenient: Vec::new(),
            extension_used: None,
            stabilization_trace: Vec::new(),
            constant_term: 0,
            warnings: Vec::new(),
            tables: Vec::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio;

    #[test]
    fn mu_only_for_nonnegative_integers() {
        assert_eq!(integral_mu(&rat(5)), Some(5));
        assert_eq!(integral_mu(&rat(0)), Some(0));
        assert_eq!(integral_mu(&rat(-1)), None);
        assert_eq!(integral_mu(&ratio(3, 2)), None);
    }

    #[test]
    fn json_is_deterministic() {
        let report = NewtonNumberReport::assemble(
            2,
            1,
            rat(2),
            vec![(vec![1], rat(-2)), (vec![2], rat(-3)), (vec![1, 2], rat(6))],
            vec![true],
            None,
            Vec::new(),
            1,
            Vec::new(),
        );
        assert!(report.is_consistent());
        let a = serde_json::to_string(&report.to_json("milnor")).unwrap();
        let b = serde_json::to_string(&report.to_json("milnor")).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("\"nu\":\"2\""));
        assert!(a.contains("\"mu\":2"));
        assert!(a.contains("\"1,2\":\"6\""));
    }
}
