//! From the singularities of a curve `X'` to the invariants of its normalization `X`.
//!
//! The Jacobians sit in `0 -> G -> J_{X'} -> J_X -> 0` with `G` affine of
//! dimension `sum delta`, splitting as a torus times a unipotent group. The
//! p-rank drops by the toric rank; the a-number drops by at most `dim G_u`.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JacobianError {
    #[error("invalid singularity: {0}")]
    InvalidSingularity(String),
    #[error("inconsistent invariants: {0}")]
    InconsistentInvariants(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SingularityKind {
    /// `b` smooth branches with distinct tangents.
    OrdinaryMultiplePoint { branches: u64 },
    /// `z^2 = x^r`, `r` odd.
    Cusp { r: u64 },
    /// `x^m = y^m`.
    Diagonal { m: u64 },
}

impl SingularityKind {
    pub fn validate(&self) -> Result<(), JacobianError> {
        match *self {
            SingularityKind::OrdinaryMultiplePoint { branches } if branches < 2 => Err(
                JacobianError::InvalidSingularity(format!("ordinary point needs at least 2 branches, got {branches}")),
            ),
            SingularityKind::Cusp { r } if r < 3 || r % 2 == 0 => Err(JacobianError::InvalidSingularity(
                format!("cusp z^2 = x^r needs odd r >= 3, got {r}"),
            )),
            SingularityKind::Diagonal { m } if m < 2 => Err(JacobianError::InvalidSingularity(format!(
                "x^m = y^m needs m >= 2, got {m}"
            ))),
            _ => Ok(()),
        }
    }

    pub fn delta(&self) -> u64 {
        match *self {
            SingularityKind::OrdinaryMultiplePoint { branches: b } => b * (b - 1) / 2,
            SingularityKind::Cusp { r } => (r - 1) / 2,
            SingularityKind::Diagonal { m } => m * (m - 1) / 2,
        }
    }

    pub fn branches(&self) -> u64 {
        match *self {
            SingularityKind::OrdinaryMultiplePoint { branches } => branches,
            SingularityKind::Cusp { .. } => 1,
            SingularityKind::Diagonal { m } => m,
        }
    }

    /// Parses `ordinary:B`, `cusp:R` or `diagonal:M`.
    pub fn parse(text: &str) -> Result<Self, JacobianError> {
        let bad = || JacobianError::InvalidSingularity(format!("cannot parse {text:?}"));
        let (kind, param) = text.split_once(':').ok_or_else(bad)?;
        let v: u64 = param.trim().parse().map_err(|_| bad())?;
        let k = match kind.trim() {
            "ordinary" => SingularityKind::OrdinaryMultiplePoint { branches: v },
            "cusp" => SingularityKind::Cusp { r: v },
            "diagonal" => SingularityKind::Diagonal { m: v },
            _ => return Err(bad()),
        };
        k.validate()?;
        Ok(k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SingularityDatum {
    pub kind: SingularityKind,
    pub count: u64,
}

impl SingularityDatum {
    /// Parses `kind:param:count`, e.g. `ordinary:3:2`.
    pub fn parse(text: &str) -> Result<Self, JacobianError> {
        let (kind, count) = text
            .rsplit_once(':')
            .ok_or_else(|| JacobianError::InvalidSingularity(format!("expected kind:param:count, got {text:?}")))?;
        let count: u64 = count
            .trim()
            .parse()
            .map_err(|_| JacobianError::InvalidSingularity(format!("bad count in {text:?}")))?;
        if count == 0 {
            return Err(JacobianError::InvalidSingularity("count must be positive".into()));
        }
        Ok(SingularityDatum {
            kind: SingularityKind::parse(kind)?,
            count,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct JacobianDecomposition {
    #[serde(rename = "dim_G")]
    pub dim_g: u64,
    pub toric_rank: u64,
    pub unipotent_dim: u64,
}

/// Toric rank is `branches - 1` per point, the rest of `delta` is unipotent.
pub fn decompose(data: &[SingularityDatum]) -> JacobianDecomposition {
    let dim_g: u64 = data.iter().map(|d| d.count * d.kind.delta()).sum();
    let toric_rank: u64 = data.iter().map(|d| d.count * (d.kind.branches() - 1)).sum();
    JacobianDecomposition {
        dim_g,
        toric_rank,
        unipotent_dim: dim_g - toric_rank,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SmoothModel {
    pub g: u64,
    pub sigma_smooth: u64,
    /// `max(0, a' - dim G_u)`, valid since `a(G_u) <= dim G_u`; absent when `a'` is unknown.
    pub a_lower_bound: Option<u64>,
    pub ordinary: bool,
}

pub fn smooth_model_invariants(
    pa: u64,
    sigma_singular: u64,
    a_singular: Option<u64>,
    d: &JacobianDecomposition,
) -> Result<SmoothModel, JacobianError> {
    if sigma_singular < d.toric_rank {
        return Err(JacobianError::InconsistentInvariants(format!(
            "p-rank {sigma_singular} is smaller than the toric rank {}",
            d.toric_rank
        )));
    }
    if pa < d.dim_g {
        return Err(JacobianError::InconsistentInvariants(format!(
            "arithmetic genus {pa} is smaller than dim G = {}",
            d.dim_g
        )));
    }
    let g = pa - d.dim_g;
    let sigma_smooth = sigma_singular - d.toric_rank;
    if sigma_smooth > g {
        return Err(JacobianError::InconsistentInvariants(format!(
            "p-rank {sigma_smooth} of the normalization exceeds its genus {g}"
        )));
    }
    Ok(SmoothModel {
        g,
        sigma_smooth,
        a_lower_bound: a_singular.map(|a| a.saturating_sub(d.unipotent_dim)),
        ordinary: sigma_smooth == g,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JacobianReport {
    #[serde(flatten)]
    pub decomposition: JacobianDecomposition,
    #[serde(flatten)]
    pub model: SmoothModel,
    /// Disagreements with a stated formula; the generic path has none.
    pub flags: Vec<String>,
    pub notes: Vec<String>,
}

pub fn jacobian_report(
    pa: u64,
    sigma_singular: u64,
    a_singular: Option<u64>,
    data: &[SingularityDatum],
) -> Result<JacobianReport, JacobianError> {
    for d in data {
        d.kind.validate()?;
    }
    let decomposition = decompose(data);
    let model = smooth_model_invariants(pa, sigma_singular, a_singular, &decomposition)?;
    let mut notes = Vec::new();
    if decomposition.unipotent_dim > 0 && a_singular.is_some() {
        notes.push(format!(
            "unipotent part of dimension {} only gives a lower bound on the a-number",
            decomposition.unipotent_dim
        ));
    }
    Ok(JacobianReport {
        decomposition,
        model,
        flags: Vec::new(),
        notes,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SingularFermatPreset {
    pub m: u64,
    pub n: u64,
    /// Symbolic coordinates; `mu_i` runs over the m-th roots of `-1` and
    /// `zeta_j` over the m-th roots of unity.
    pub points: Vec<String>,
    pub data: Vec<SingularityDatum>,
    pub decomposition: JacobianDecomposition,
    pub toric_rank_enumerated: u64,
    pub toric_rank_closed_form: u64,
    /// Toric rank if each point contributed `m` multiplicative factors instead of `m - 1`.
    pub toric_rank_m_factors_per_point: u64,
    pub relations: Vec<String>,
    pub flags: Vec<String>,
}

/// The curve `C^m(1, 1, lambda_2, ..., lambda_{n-2})` with its singular points
/// `[1 : mu_i : 0 : 0 : (lambda_j - 1)^{1/m} zeta_j ...]`, each of type `x^m = y^m`.
pub fn singular_fermat_preset(m: u64, n: u64) -> Result<SingularFermatPreset, JacobianError> {
    if m < 2 || n < 3 {
        return Err(JacobianError::InvalidSingularity(format!(
            "the preset needs m >= 2 and n >= 3, got m = {m}, n = {n}"
        )));
    }
    let mut points = Vec::new();
    let tail_len = (n - 3) as u32;
    for i in 1..=m {
        for idx in 0..m.pow(tail_len) {
            let mut coords = vec!["1".to_string(), format!("mu_{i}"), "0".into(), "0".into()];
            let mut rest = idx;
            for j in 2..n - 1 {
                let k = rest % m + 1;
                rest /= m;
                coords.push(format!("(lambda_{j}-1)^(1/{m})*zeta_{k}"));
            }
            points.push(format!("[{}]", coords.join(" : ")));
        }
    }
    let count = points.len() as u64;
    let data = vec![SingularityDatum {
        kind: SingularityKind::Diagonal { m },
        count,
    }];
    let decomposition = decompose(&data);
    let toric_rank_enumerated = decomposition.toric_rank;
    let toric_rank_closed_form = (n - 2).pow(m as u32) * (m - 1);
    let toric_rank_m_factors_per_point = count * m;
    let mut relations = vec![
        "a(X) = a(X')".to_string(),
        format!("sigma(X) = sigma(X') - {toric_rank_enumerated}"),
        format!("g(X) = p_a(X') - {}", decomposition.dim_g),
    ];
    let mut flags = Vec::new();
    if toric_rank_closed_form != toric_rank_enumerated {
        flags.push(format!(
            "closed-form toric rank (n-2)^m (m-1) = {toric_rank_closed_form} differs from the {count} enumerated points giving {toric_rank_enumerated}"
        ));
    }
    if decomposition.unipotent_dim > 0 {
        relations.push(format!("a(X) >= a(X') - {}", decomposition.unipotent_dim));
        flags.push(format!(
            "G has a unipotent part of dimension {}, so only a(X) >= a(X') - {} follows",
            decomposition.unipotent_dim, decomposition.unipotent_dim
        ));
    }
    Ok(SingularFermatPreset {
        m,
        n,
        points,
        data,
        decomposition,
        toric_rank_enumerated,
        toric_rank_closed_form,
        toric_rank_m_factors_per_point,
        relations,
        flags,
    })
}
