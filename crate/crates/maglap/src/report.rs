//! JSON payloads and the run envelope.

use maglap_core::cheeger::{Candidate, ClusterCertificate};
use maglap_core::frustration::{BalanceReport, FrustrationResult};
use maglap_core::multiway::MultiwayReport;
use maglap_core::spectral::Spectrum;
use maglap_core::{GroupElement, SignedGraph, VertexSet};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

/// Hex SHA-256 of the input bytes.
pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// `{command, input_digest, seed, wall_time_s, payload}`. Only `payload` is
/// guaranteed to be reproducible.
pub fn envelope(command: &str, input_digest: Option<&str>, seed: u64, wall_time_s: f64, payload: Value) -> Value {
    json!({
        "command": command,
        "input_digest": input_digest,
        "seed": seed,
        "wall_time_s": wall_time_s,
        "payload": payload,
    })
}

/// Maps `-0.0` to `0.0`.
fn num(x: f64) -> f64 {
    x + 0.0
}

pub fn set_json(s: &VertexSet) -> Value {
    json!(s.as_slice())
}

fn element(g: GroupElement) -> Value {
    match g {
        GroupElement::Cyclic { k, j } => json!({ "k": k, "j": j }),
        GroupElement::Circle(t) => json!({ "theta": t }),
    }
}

pub fn candidate_json(c: &Candidate) -> Value {
    match c {
        Candidate::Set(s) => json!({ "kind": "set", "vertices": set_json(s) }),
        Candidate::Partition(p) => json!({
            "kind": "partition",
            "base": set_json(p.base()),
            "parts": p.parts().iter().map(set_json).collect::<Vec<_>>(),
        }),
    }
}

/// Certificate schema: `{candidate, ratio, bound, frustration: {value,
/// exact}, boundary, volume, t, theta, …}`.
pub fn certificate_json(g: &SignedGraph, c: &ClusterCertificate) -> Value {
    json!({
        "candidate": candidate_json(&c.candidate),
        "ratio": num(c.ratio),
        "bound": num(c.bound),
        "certified": c.is_certified(1e-9),
        "recomputed_ratio": c.recompute(g).ok(),
        "frustration": { "value": num(c.frustration), "exact": c.frustration_exact },
        "boundary": num(c.boundary),
        "volume": num(c.volume),
        "t": num(c.t),
        "theta": c.theta.map(num),
        "rayleigh": num(c.rayleigh),
        "lower_bound_constant": c.lower_constant,
    })
}

pub fn balance_json(r: &BalanceReport) -> Value {
    let comps: Vec<Value> = r
        .components
        .iter()
        .map(|c| {
            json!({
                "vertices": c.vertices,
                "balanced": c.balanced,
                "witness": c.witness.as_ref().map(|w| w.values().iter().map(|&t| element(t)).collect::<Vec<_>>()),
                "violating_cycle": c.violating_cycle,
                "cycle_signature": c.cycle_signature.map(element),
            })
        })
        .collect();
    json!({ "balanced": r.all_balanced(), "components": comps })
}

pub fn frustration_json(r: &FrustrationResult) -> Value {
    json!({
        "value": num(r.value),
        "exact": r.exactness.is_exact(),
        "set": set_json(r.tau.domain()),
        "tau": r.tau.values().iter().map(|&t| element(t)).collect::<Vec<_>>(),
    })
}

pub fn spectrum_json(g: &SignedGraph, sp: &Spectrum, vectors: bool) -> Value {
    let dmu = g.max_mu_degree();
    let tol = 1e-9;
    let mut v = json!({
        "n": g.num_vertices(),
        "group": g.group().to_string(),
        "d_mu": dmu,
        "eigenvalues": sp.values,
        "bounds_ok": sp.values.iter().all(|&l| l >= -tol && l <= 2.0 * dmu + tol),
    });
    if vectors {
        v["eigenvectors"] = json!(sp
            .vectors
            .iter()
            .map(|f| f.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>())
            .collect::<Vec<_>>());
    }
    v
}

pub fn multiway_json(g: &SignedGraph, r: &MultiwayReport) -> Value {
    let d = &r.decomposition;
    json!({
        "certificates": r.certificates.iter().map(|c| certificate_json(g, c)).collect::<Vec<_>>(),
        "embedding_rayleigh": r.embedding_rayleigh,
        "lambda_n": r.lambda_n,
        "separation": d.separation,
        "epsilon": r.epsilon,
        "mass_fractions": d.mass_fractions,
        "retries": d.retries,
        "core_fraction": d.core_fraction,
        "parts": d.parts.iter().map(set_json).collect::<Vec<_>>(),
        "coordinates": r.coordinates,
        "key_estimate_slack": r.key_slack,
        "localization_slack": r.localization_slack,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_is_sha256() {
        assert_eq!(digest(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }
}
