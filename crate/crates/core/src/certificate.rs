//! Machine-readable verdict trees. A certificate records every hypothesis of
//! a criterion as a node that is either computed here or imported from the
//! literature (an axiom node, which always carries its citation), so a reader
//! can tell verified arithmetic from quoted theorems.

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

pub const VERDICT_CERTIFIED: &str = "CERTIFIED";
pub const VERDICT_NOT_CERTIFIED: &str = "NOT CERTIFIED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Computed,
    Axiom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeVerdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct HypothesisNode {
    pub name: String,
    pub kind: NodeKind,
    pub verdict: NodeVerdict,
    pub witness: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cite: Option<String>,
}

impl HypothesisNode {
    pub fn computed(name: &str, pass: bool, witness: Value) -> Self {
        HypothesisNode {
            name: name.to_string(),
            kind: NodeKind::Computed,
            verdict: if pass { NodeVerdict::Pass } else { NodeVerdict::Fail },
            witness,
            cite: None,
        }
    }

    /// Axiom nodes record imported theorems; they always pass and always
    /// carry a citation.
    pub fn axiom(name: &str, cite: &str, statement: Value) -> Self {
        HypothesisNode {
            name: name.to_string(),
            kind: NodeKind::Axiom,
            verdict: NodeVerdict::Pass,
            witness: statement,
            cite: Some(cite.to_string()),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == NodeVerdict::Pass
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub schema_version: u32,
    pub theorem: String,
    pub surface: Value,
    pub nodes: Vec<HypothesisNode>,
    pub verdict: String,
}

impl Certificate {
    /// Overall verdict: pass iff every node (computed and axiom) passes.
    pub fn new(theorem: &str, surface: Value, nodes: Vec<HypothesisNode>) -> Self {
        let all_pass = nodes.iter().all(HypothesisNode::passed);
        Certificate {
            schema_version: SCHEMA_VERSION,
            theorem: theorem.to_string(),
            surface,
            nodes,
            verdict: if all_pass { VERDICT_CERTIFIED } else { VERDICT_NOT_CERTIFIED }.to_string(),
        }
    }

    pub fn certified(&self) -> bool {
        self.verdict == VERDICT_CERTIFIED
    }

    pub fn failing_nodes(&self) -> Vec<&str> {
        self.nodes.iter().filter(|n| !n.passed()).map(|n| n.name.as_str()).collect()
    }

    pub fn node(&self, name: &str) -> Option<&HypothesisNode> {
        self.nodes.iter().find(|n| n.name == name)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serialization cannot fail")
    }
}
