use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::Error;

/// Tolerance on the sum of chance probabilities.
pub const CHANCE_SUM_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct InfoSetId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PlayerId(pub usize);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Node {
    Decision {
        player: PlayerId,
        info_set: InfoSetId,
        actions: Vec<String>,
        children: Vec<NodeId>,
    },
    /// Moves by nature with fixed probabilities.
    Chance {
        actions: Vec<String>,
        probabilities: Vec<f64>,
        children: Vec<NodeId>,
    },
    /// One utility per player, in the tree's player order.
    Leaf { payoffs: Vec<f64> },
}

impl Node {
    pub fn children(&self) -> &[NodeId] {
        match self {
            Node::Decision { children, .. } | Node::Chance { children, .. } => children,
            Node::Leaf { .. } => &[],
        }
    }

    pub fn actions(&self) -> &[String] {
        match self {
            Node::Decision { actions, .. } | Node::Chance { actions, .. } => actions,
            Node::Leaf { .. } => &[],
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Node::Leaf { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InfoSet {
    pub label: String,
    pub player: PlayerId,
    pub nodes: Vec<NodeId>,
}

/// A finite, rooted extensive-form game stored as a flat node array.
///
/// Node 0 is the root. Every decision node belongs to exactly one
/// information set, and all nodes of a set share the owner and the ordered
/// action labels. Construct through [`TreeBuilder`] or deserialize; both
/// paths run the same validation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGameTree")]
pub struct GameTree {
    players: Vec<String>,
    nodes: Vec<Node>,
    info_sets: Vec<InfoSet>,
}

#[derive(Deserialize)]
struct RawGameTree {
    players: Vec<String>,
    nodes: Vec<Node>,
    info_sets: Vec<InfoSet>,
}

impl TryFrom<RawGameTree> for GameTree {
    type Error = Error;

    fn try_from(raw: RawGameTree) -> Result<Self, Error> {
        GameTree::new(raw.players, raw.nodes, raw.info_sets)
    }
}

fn malformed(msg: String) -> Error {
    Error::MalformedTree(msg)
}

impl GameTree {
    pub fn new(
        players: Vec<String>,
        nodes: Vec<Node>,
        info_sets: Vec<InfoSet>,
    ) -> Result<Self, Error> {
        let tree = GameTree {
            players,
            nodes,
            info_sets,
        };
        tree.validate()?;
        Ok(tree)
    }

    fn validate(&self) -> Result<(), Error> {
        let n = self.nodes.len();
        if n == 0 {
            return Err(malformed("tree has no nodes".into()));
        }
        if self.players.is_empty() {
            return Err(malformed("tree has no players".into()));
        }

        let mut parents = vec![0usize; n];
        for (i, node) in self.nodes.iter().enumerate() {
            match node {
                Node::Decision {
                    player,
                    info_set,
                    actions,
                    children,
                } => {
                    if player.0 >= self.players.len() {
                        return Err(Error::UnknownPlayer(player.0));
                    }
                    let set = self.info_sets.get(info_set.0).ok_or_else(|| {
                        malformed(format!(
                            "node {i} references missing information set {}",
                            info_set.0
                        ))
                    })?;
                    if set.player != *player {
                        return Err(malformed(format!(
                            "node {i} is owned by player {} but its information set `{}` belongs to player {}",
                            player.0, set.label, set.player.0
                        )));
                    }
                    check_branches(i, actions.len(), children.len())?;
                }
                Node::Chance {
                    actions,
                    probabilities,
                    children,
                } => {
                    check_branches(i, actions.len(), children.len())?;
                    if probabilities.len() != children.len() {
                        return Err(malformed(format!(
                            "chance node {i} has {} probabilities for {} children",
                            probabilities.len(),
                            children.len()
                        )));
                    }
                    let mut sum = 0.0;
                    for &p in probabilities {
                        if !(0.0..=1.0).contains(&p) {
                            return Err(malformed(format!(
                                "chance node {i} has probability {p} outside [0, 1]"
                            )));
                        }
                        sum += p;
                    }
                    if (sum - 1.0).abs() > CHANCE_SUM_TOLERANCE {
                        return Err(malformed(format!(
                            "chance node {i} probabilities sum to {sum}"
                        )));
                    }
                }
                Node::Leaf { payoffs } => {
                    if payoffs.len() != self.players.len() {
                        return Err(malformed(format!(
                            "leaf {i} has {} payoffs for {} players",
                            payoffs.len(),
                            self.players.len()
                        )));
                    }
                    if payoffs.iter().any(|v| !v.is_finite()) {
                        return Err(malformed(format!("leaf {i} has a non-finite payoff")));
                    }
                }
            }
            for child in node.children() {
                if child.0 >= n {
                    return Err(malformed(format!(
                        "node {i} has out-of-range child {}",
                        child.0
                    )));
                }
                parents[child.0] += 1;
            }
        }

        if parents[0] != 0 {
            return Err(malformed("root node has a parent".into()));
        }
        if let Some(i) = (1..n).find(|&i| parents[i] != 1) {
            return Err(malformed(format!(
                "node {i} has {} parents, expected exactly 1",
                parents[i]
            )));
        }
        // With one parent per non-root node, reachability from the root rules out cycles.
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        while let Some(i) = stack.pop() {
            seen[i] = true;
            stack.extend(self.nodes[i].children().iter().map(|c| c.0));
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(malformed(format!("node {i} is unreachable from the root")));
        }

        let mut labels = BTreeSet::new();
        let mut membership = vec![0usize; n];
        for (s, set) in self.info_sets.iter().enumerate() {
            if !labels.insert(set.label.as_str()) {
                return Err(malformed(format!(
                    "duplicate information set label `{}`",
                    set.label
                )));
            }
            if set.player.0 >= self.players.len() {
                return Err(Error::UnknownPlayer(set.player.0));
            }
            let first = set
                .nodes
                .first()
                .ok_or_else(|| malformed(format!("information set `{}` is empty", set.label)))?;
            let reference = self.nodes.get(first.0).map(Node::actions).ok_or_else(|| {
                malformed(format!(
                    "information set `{}` lists missing node",
                    set.label
                ))
            })?;
            for id in &set.nodes {
                match self.nodes.get(id.0) {
                    Some(Node::Decision {
                        info_set, actions, ..
                    }) if info_set.0 == s => {
                        if actions.as_slice() != reference {
                            return Err(malformed(format!(
                                "information set `{}` mixes action lists",
                                set.label
                            )));
                        }
                        membership[id.0] += 1;
                    }
                    _ => return Err(malformed(format!(
                        "information set `{}` lists node {} which is not one of its decision nodes",
                        set.label, id.0
                    ))),
                }
            }
        }
        for (i, node) in self.nodes.iter().enumerate() {
            if matches!(node, Node::Decision { .. }) && membership[i] != 1 {
                return Err(malformed(format!(
                    "decision node {i} appears in {} information sets",
                    membership[i]
                )));
            }
        }
        Ok(())
    }

    pub fn players(&self) -> &[String] {
        &self.players
    }

    pub fn player_by_name(&self, name: &str) -> Option<PlayerId> {
        self.players.iter().position(|p| p == name).map(PlayerId)
    }

    pub fn root(&self) -> NodeId {
        NodeId(0)
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.0]
    }

    pub fn info_sets(&self) -> &[InfoSet] {
        &self.info_sets
    }

    pub fn info_set(&self, id: InfoSetId) -> &InfoSet {
        &self.info_sets[id.0]
    }

    pub fn info_set_by_label(&self, label: &str) -> Option<InfoSetId> {
        self.info_sets
            .iter()
            .position(|s| s.label == label)
            .map(InfoSetId)
    }

    /// Action labels of an information set (shared by all of its nodes).
    pub fn info_set_actions(&self, id: InfoSetId) -> &[String] {
        self.node(self.info_sets[id.0].nodes[0]).actions()
    }

    pub fn info_sets_of(&self, player: PlayerId) -> impl Iterator<Item = InfoSetId> + '_ {
        self.info_sets
            .iter()
            .enumerate()
            .filter(move |(_, s)| s.player == player)
            .map(|(i, _)| InfoSetId(i))
    }

    /// Leaves in depth-first, left-to-right order.
    pub fn leaves(&self) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut stack = vec![self.root()];
        while let Some(id) = stack.pop() {
            let node = self.node(id);
            if node.is_leaf() {
                out.push(id);
            }
            stack.extend(node.children().iter().rev().copied());
        }
        out
    }

    pub fn leaf_payoffs(&self, id: NodeId) -> Option<&[f64]> {
        match self.node(id) {
            Node::Leaf { payoffs } => Some(payoffs),
            _ => None,
        }
    }

    pub fn decision_node_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, Node::Decision { .. }))
            .count()
    }

    /// Copy of the tree with leaf payoffs rewritten. The closure receives the
    /// leaf's position in [`GameTree::leaves`] order.
    pub fn map_payoffs(&self, mut f: impl FnMut(usize, &mut [f64])) -> GameTree {
        let mut out = self.clone();
        for (ordinal, id) in self.leaves().into_iter().enumerate() {
            if let Node::Leaf { payoffs } = &mut out.nodes[id.0] {
                f(ordinal, payoffs);
            }
        }
        out
    }
}

fn check_branches(i: usize, actions: usize, children: usize) -> Result<(), Error> {
    if children == 0 {
        return Err(malformed(format!("non-leaf node {i} has no children")));
    }
    if actions != children {
        return Err(malformed(format!(
            "node {i} has {actions} actions for {children} children"
        )));
    }
    Ok(())
}

/// Bottom-up constructor for [`GameTree`].
///
/// Children are created before their parent. [`TreeBuilder::finish`]
/// renumbers nodes in preorder from the chosen root, fills in the
/// information-set node lists and validates the result.
#[derive(Debug, Clone)]
pub struct TreeBuilder {
    players: Vec<String>,
    nodes: Vec<Node>,
    info_sets: Vec<(String, PlayerId)>,
}

impl TreeBuilder {
    pub fn new(players: &[&str]) -> Self {
        TreeBuilder {
            players: players.iter().map(|p| p.to_string()).collect(),
            nodes: Vec::new(),
            info_sets: Vec::new(),
        }
    }

    pub fn info_set(&mut self, player: PlayerId, label: &str) -> InfoSetId {
        self.info_sets.push((label.to_string(), player));
        InfoSetId(self.info_sets.len() - 1)
    }

    pub fn leaf(&mut self, payoffs: Vec<f64>) -> NodeId {
        self.push(Node::Leaf { payoffs })
    }

    pub fn decision(&mut self, info_set: InfoSetId, branches: &[(&str, NodeId)]) -> NodeId {
        let player = self
            .info_sets
            .get(info_set.0)
            .map(|(_, p)| *p)
            .unwrap_or(PlayerId(usize::MAX));
        self.push(Node::Decision {
            player,
            info_set,
            actions: branches.iter().map(|(a, _)| a.to_string()).collect(),
            children: branches.iter().map(|(_, c)| *c).collect(),
        })
    }

    pub fn chance(&mut self, branches: &[(&str, f64, NodeId)]) -> NodeId {
        self.push(Node::Chance {
            actions: branches.iter().map(|(a, _, _)| a.to_string()).collect(),
            probabilities: branches.iter().map(|(_, p, _)| *p).collect(),
            children: branches.iter().map(|(_, _, c)| *c).collect(),
        })
    }

    fn push(&mut self, node: Node) -> NodeId {
        self.nodes.push(node);
        NodeId(self.nodes.len() - 1)
    }

    pub fn finish(self, root: NodeId) -> Result<GameTree, Error> {
        let n = self.nodes.len();
        if root.0 >= n {
            return Err(malformed(format!("root {} does not exist", root.0)));
        }
        // Preorder renumbering.
        let mut order = Vec::with_capacity(n);
        let mut new_id = vec![usize::MAX; n];
        let mut stack = vec![root.0];
        while let Some(i) = stack.pop() {
            if new_id[i] != usize::MAX {
                return Err(malformed(format!("node {i} is reachable along two paths")));
            }
            new_id[i] = order.len();
            order.push(i);
            for c in self.nodes[i].children().iter().rev() {
                if c.0 >= n {
                    return Err(malformed(format!(
                        "node {i} has out-of-range child {}",
                        c.0
                    )));
                }
                stack.push(c.0);
            }
        }
        if order.len() != n {
            return Err(malformed(format!(
                "{} nodes are not reachable from the root",
                n - order.len()
            )));
        }

        let remap = |children: &[NodeId]| children.iter().map(|c| NodeId(new_id[c.0])).collect();
        let mut nodes = Vec::with_capacity(n);
        let mut set_nodes: Vec<Vec<NodeId>> = vec![Vec::new(); self.info_sets.len()];
        for (pos, &old) in order.iter().enumerate() {
            let node = match &self.nodes[old] {
                Node::Decision {
                    player,
                    info_set,
                    actions,
                    children,
                } => {
                    if let Some(list) = set_nodes.get_mut(info_set.0) {
                        list.push(NodeId(pos));
                    }
                    Node::Decision {
                        player: *player,
                        info_set: *info_set,
                        actions: actions.clone(),
                        children: remap(children),
                    }
                }
                Node::Chance {
                    actions,
                    probabilities,
                    children,
                } => Node::Chance {
                    actions: actions.clone(),
                    probabilities: probabilities.clone(),
                    children: remap(children),
                },
                leaf @ Node::Leaf { .. } => leaf.clone(),
            };
            nodes.push(node);
        }
        let info_sets = self
            .info_sets
            .into_iter()
            .zip(set_nodes)
            .map(|((label, player), nodes)| InfoSet {
                label,
                player,
                nodes,
            })
            .collect();
        GameTree::new(self.players, nodes, info_sets)
    }
}
