//! Port-graph backend: nets of nodes with numbered ports (0 is principal,
//! counterclockwise), conversion to and from configurations, direct graph
//! reduction including the Amb agent, and single-round parallel rewriting.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::calculus::{SchedulerPolicy, Stats};
use crate::model::{Configuration, Equation, RuleSet, Signature, SymbolAttr, Term};

pub type NodeId = u32;

/// One end of a wire: a numbered port of a node, or one of the net's ordered
/// interface slots.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PortRef {
    Node { node: NodeId, port: usize },
    Free { slot: usize },
}

impl PortRef {
    pub fn node(node: NodeId, port: usize) -> PortRef {
        PortRef::Node { node, port }
    }

    pub fn free(slot: usize) -> PortRef {
        PortRef::Free { slot }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeInfo {
    pub symbol: String,
    pub arity: usize,
    /// Amb nodes have two principal ports, 0 and 1.
    pub amb: bool,
}

impl NodeInfo {
    fn principal_ports(&self) -> &'static [usize] {
        if self.amb {
            &[0, 1]
        } else {
            &[0]
        }
    }
}

/// Two nodes wired principal-to-principal; `a < b` canonically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActivePair {
    pub a: (NodeId, usize),
    pub b: (NodeId, usize),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PortNet {
    nodes: BTreeMap<NodeId, NodeInfo>,
    links: BTreeMap<PortRef, PortRef>,
    n_free: usize,
    next_id: NodeId,
}

impl PortNet {
    pub fn new(interface_len: usize) -> PortNet {
        PortNet {
            n_free: interface_len,
            ..PortNet::default()
        }
    }

    pub fn add_node(&mut self, symbol: impl Into<String>, arity: usize, amb: bool) -> NodeId {
        let id = self.next_id;
        self.next_id += 1;
        self.nodes.insert(
            id,
            NodeInfo {
                symbol: symbol.into(),
                arity,
                amb,
            },
        );
        id
    }

    pub fn add_agent(&mut self, sig: &Signature, symbol: &str) -> NodeId {
        let arity = sig.arity(symbol).expect("declared symbol");
        self.add_node(symbol, arity, sig.attr(symbol) == Some(SymbolAttr::Amb))
    }

    pub fn link(&mut self, a: PortRef, b: PortRef) {
        self.try_link(a, b).expect("wiring invariant");
    }

    pub fn try_link(&mut self, a: PortRef, b: PortRef) -> Result<(), String> {
        if a == b {
            return Err(format!("port {a:?} cannot be wired to itself"));
        }
        for p in [&a, &b] {
            if self.links.contains_key(p) {
                return Err(format!("port {p:?} is already wired"));
            }
        }
        self.links.insert(a, b);
        self.links.insert(b, a);
        Ok(())
    }

    fn unlink(&mut self, p: PortRef) -> Option<PortRef> {
        let q = self.links.remove(&p)?;
        if q != p {
            self.links.remove(&q);
        }
        Some(q)
    }

    pub fn peer(&self, p: PortRef) -> Option<PortRef> {
        self.links.get(&p).copied()
    }

    pub fn interface_len(&self) -> usize {
        self.n_free
    }

    pub fn node(&self, id: NodeId) -> Option<&NodeInfo> {
        self.nodes.get(&id)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &NodeInfo)> {
        self.nodes.iter().map(|(k, v)| (*k, v))
    }

    pub fn find_node(&self, symbol: &str) -> Option<NodeId> {
        self.nodes
            .iter()
            .find(|(_, info)| info.symbol == symbol)
            .map(|(id, _)| *id)
    }

    /// Every wire once, canonically ordered.
    pub fn wires(&self) -> Vec<(PortRef, PortRef)> {
        self.links
            .iter()
            .filter(|(a, b)| a < b)
            .map(|(a, b)| (*a, *b))
            .collect()
    }

    /// Checks totality: every port of every node and every interface slot is
    /// wired exactly once, to something that exists.
    pub fn check(&self) -> Result<(), String> {
        for (id, info) in &self.nodes {
            for port in 0..=info.arity {
                let p = PortRef::node(*id, port);
                match self.links.get(&p) {
                    None => return Err(format!("dangling port {p:?}")),
                    Some(q) if self.links.get(q) != Some(&p) => {
                        return Err(format!("asymmetric wire at {p:?}"))
                    }
                    Some(PortRef::Node { node, port }) => {
                        let peer_info = self
                            .nodes
                            .get(node)
                            .ok_or_else(|| format!("wire to unknown node {node}"))?;
                        if *port > peer_info.arity {
                            return Err(format!("wire to out-of-range port {node}.{port}"));
                        }
                    }
                    Some(PortRef::Free { slot }) if *slot >= self.n_free => {
                        return Err(format!("wire to out-of-range interface slot {slot}"))
                    }
                    Some(_) => {}
                }
            }
        }
        for slot in 0..self.n_free {
            if !self.links.contains_key(&PortRef::free(slot)) {
                return Err(format!("dangling interface slot {slot}"));
            }
        }
        Ok(())
    }

    /// All principal-to-principal wires between distinct nodes.
    pub fn active_pairs(&self) -> Vec<ActivePair> {
        let mut out = BTreeSet::new();
        for (p, q) in self.links.iter() {
            let (PortRef::Node { node: n1, port: p1 }, PortRef::Node { node: n2, port: p2 }) = (p, q)
            else {
                continue;
            };
            if n1 == n2 {
                continue;
            }
            let i1 = &self.nodes[n1];
            let i2 = &self.nodes[n2];
            if i1.principal_ports().contains(p1) && i2.principal_ports().contains(p2) {
                let (a, b) = if (n1, p1) <= (n2, p2) {
                    ((*n1, *p1), (*n2, *p2))
                } else {
                    ((*n2, *p2), (*n1, *p1))
                };
                out.insert(ActivePair { a, b });
            }
        }
        out.into_iter().collect()
    }

    /// Node ids of components reachable from the interface.
    fn interface_connected(&self) -> HashSet<NodeId> {
        let mut seen_ports: HashSet<PortRef> = HashSet::new();
        let mut out = HashSet::new();
        let mut frontier: Vec<PortRef> = (0..self.n_free).map(PortRef::free).collect();
        while let Some(p) = frontier.pop() {
            if !seen_ports.insert(p) {
                continue;
            }
            if let Some(q) = self.peer(p) {
                frontier.push(q);
            }
            if let PortRef::Node { node, .. } = p {
                if out.insert(node) {
                    let arity = self.nodes[&node].arity;
                    for port in 0..=arity {
                        frontier.push(PortRef::node(node, port));
                    }
                }
            }
        }
        out
    }

    /// Deletes every component that cannot reach the interface; the result of
    /// a computation is defined relative to the interface only. Returns the
    /// number of nodes dropped.
    pub fn drop_disconnected(&mut self) -> usize {
        let keep = self.interface_connected();
        let doomed: Vec<NodeId> = self.nodes.keys().filter(|id| !keep.contains(id)).copied().collect();
        for id in &doomed {
            let arity = self.nodes[id].arity;
            for port in 0..=arity {
                self.unlink(PortRef::node(*id, port));
            }
            self.nodes.remove(id);
        }
        doomed.len()
    }
}

// ---------------------------------------------------------------------------
// Wiring through junction chains
// ---------------------------------------------------------------------------

/// End of a pending connection while assembling or rewriting a net: a real
/// port, or another junction in the chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum End {
    Port(PortRef),
    Junction(usize),
}

/// Every junction carries exactly two ends. A chain of junctions with real
/// ports at both extremes becomes one wire; a closed loop of junctions has
/// no observable structure and is dropped.
fn resolve_junctions(net: &mut PortNet, ends: &[[End; 2]]) {
    let n = ends.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let root = find(parent, parent[i]);
            parent[i] = root;
        }
        parent[i]
    }
    for (i, pair) in ends.iter().enumerate() {
        for end in pair {
            if let End::Junction(j) = end {
                let (a, b) = (find(&mut parent, i), find(&mut parent, *j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut ports: HashMap<usize, Vec<PortRef>> = HashMap::new();
    for (i, pair) in ends.iter().enumerate() {
        let root = find(&mut parent, i);
        for end in pair {
            if let End::Port(p) = end {
                ports.entry(root).or_default().push(*p);
            }
        }
    }
    for (_, ps) in ports {
        match ps.len() {
            0 => {}
            2 => net.link(ps[0], ps[1]),
            n => panic!("junction chain with {n} port ends"),
        }
    }
}

/// Builds the tree of an agent term into the net and returns its root
/// (principal) port. Name leaves are reported through `on_name`.
fn graft_tree(
    net: &mut PortNet,
    sig: &Signature,
    term: &Term,
    on_name: &mut impl FnMut(&str, PortRef),
) -> PortRef {
    let Term::Agent { symbol, args } = term else {
        panic!("graft_tree expects an agent term");
    };
    let id = net.add_agent(sig, symbol);
    for (i, arg) in args.iter().enumerate() {
        let port = PortRef::node(id, i + 1);
        match arg {
            Term::Agent { .. } => {
                let root = graft_tree(net, sig, arg, on_name);
                net.link(port, root);
            }
            Term::Name(x) => on_name(x, port),
        }
    }
    PortRef::node(id, 0)
}

// ---------------------------------------------------------------------------
// Configuration -> net
// ---------------------------------------------------------------------------

/// Converts a configuration to a net. Each head term becomes a tree whose
/// root principal port feeds interface slot `i`; each equation wires two
/// roots principal-to-principal; name pairs become wires; free names become
/// trailing interface slots in first-occurrence order.
pub fn config_to_net(config: &Configuration, sig: &Signature) -> PortNet {
    let free = config.free_names();
    let n_free = config.head.len() + free.len();
    let mut net = PortNet::new(n_free);

    // Occurrences of each name: a real port, or a name-to-name equation.
    enum Occ {
        Port(PortRef),
        Alias(usize),
    }
    let mut occurrences: BTreeMap<String, Vec<Occ>> = BTreeMap::new();
    let mut n_aliases = 0usize;
    let mut alias_names: Vec<(String, String)> = Vec::new();

    {
        let on_name = |occ: &mut BTreeMap<String, Vec<Occ>>, x: &str, p: PortRef| {
            occ.entry(x.to_string()).or_default().push(Occ::Port(p));
        };
        for (i, t) in config.head.iter().enumerate() {
            let slot = PortRef::free(i);
            match t {
                Term::Agent { .. } => {
                    let root = graft_tree(&mut net, sig, t, &mut |x, p| {
                        occurrences.entry(x.to_string()).or_default().push(Occ::Port(p));
                    });
                    net.link(slot, root);
                }
                Term::Name(x) => on_name(&mut occurrences, x, slot),
            }
        }
        for eq in &config.equations {
            match (&eq.left, &eq.right) {
                (l @ Term::Agent { .. }, r @ Term::Agent { .. }) => {
                    let lr = graft_tree(&mut net, sig, l, &mut |x, p| {
                        occurrences.entry(x.to_string()).or_default().push(Occ::Port(p));
                    });
                    let rr = graft_tree(&mut net, sig, r, &mut |x, p| {
                        occurrences.entry(x.to_string()).or_default().push(Occ::Port(p));
                    });
                    net.link(lr, rr);
                }
                (Term::Name(x), t @ Term::Agent { .. }) | (t @ Term::Agent { .. }, Term::Name(x)) => {
                    let root = graft_tree(&mut net, sig, t, &mut |x, p| {
                        occurrences.entry(x.to_string()).or_default().push(Occ::Port(p));
                    });
                    on_name(&mut occurrences, x, root);
                }
                (Term::Name(x), Term::Name(y)) => {
                    if x == y {
                        continue; // x = x: a closed loop, nothing observable
                    }
                    let k = n_aliases;
                    n_aliases += 1;
                    alias_names.push((x.clone(), y.clone()));
                    occurrences.entry(x.clone()).or_default().push(Occ::Alias(k));
                    occurrences.entry(y.clone()).or_default().push(Occ::Alias(k));
                }
            }
        }
        for (k, x) in free.iter().enumerate() {
            let slot = PortRef::free(config.head.len() + k);
            on_name(&mut occurrences, x, slot);
        }
    }

    // Junctions: one per name, one per name-to-name equation. Each has
    // exactly two ends; chains resolve to single wires.
    let name_junction: BTreeMap<&String, usize> = occurrences
        .keys()
        .enumerate()
        .map(|(i, n)| (n, i))
        .collect();
    let n_names = name_junction.len();
    let mut ends: Vec<[End; 2]> = Vec::with_capacity(n_names + n_aliases);
    for (name, occ) in &occurrences {
        assert_eq!(occ.len(), 2, "name {name} must have exactly two ends");
        let as_end = |o: &Occ| match o {
            Occ::Port(p) => End::Port(*p),
            Occ::Alias(k) => End::Junction(n_names + k),
        };
        ends.push([as_end(&occ[0]), as_end(&occ[1])]);
    }
    for (x, y) in &alias_names {
        ends.push([
            End::Junction(name_junction[x]),
            End::Junction(name_junction[y]),
        ]);
    }
    resolve_junctions(&mut net, &ends);
    net
}

// ---------------------------------------------------------------------------
// Net -> configuration
// ---------------------------------------------------------------------------

/// Readable wire names for [`net_to_config`]: a, b, ..., z, a1, b1, ...
struct WireNames {
    assigned: HashMap<(PortRef, PortRef), String>,
    next: usize,
}

impl WireNames {
    fn new() -> Self {
        WireNames {
            assigned: HashMap::new(),
            next: 0,
        }
    }

    fn get(&mut self, a: PortRef, b: PortRef) -> String {
        let key = if a <= b { (a, b) } else { (b, a) };
        if let Some(n) = self.assigned.get(&key) {
            return n.clone();
        }
        let k = self.next;
        self.next += 1;
        let letter = (b'a' + (k % 26) as u8) as char;
        let name = if k < 26 {
            letter.to_string()
        } else {
            format!("{letter}{}", k / 26)
        };
        self.assigned.insert(key, name.clone());
        name
    }
}

struct ConfigBuilder<'a> {
    net: &'a PortNet,
    names: WireNames,
    /// aux ports at which a cycle was broken, and the name closing it
    cycle_breaks: HashMap<PortRef, String>,
}

impl<'a> ConfigBuilder<'a> {
    fn build_tree(&mut self, node: NodeId) -> Term {
        let info = &self.net.nodes[&node];
        let mut args = Vec::new();
        for port in 1..=info.arity {
            let p = PortRef::node(node, port);
            if let Some(name) = self.cycle_breaks.get(&p) {
                args.push(Term::name(name.clone()));
                continue;
            }
            let q = self.net.peer(p).expect("total net");
            match q {
                PortRef::Node { node: child, port: 0 } => args.push(self.build_tree(child)),
                other => args.push(Term::name(self.names.get(p, other))),
            }
        }
        Term::agent(info.symbol.clone(), args)
    }
}

/// Inverse of [`config_to_net`] up to alpha-equivalence: every interface
/// slot becomes a head entry (a tree when the slot reaches a principal port,
/// a name otherwise), wires between two principal ports become equations,
/// and every remaining shared wire becomes a name. A parent chain that
/// closes on itself is emitted as a cyclic-tree equation `y = s` with `y`
/// inside `s`.
///
/// A net cannot tell a head slot from a free-name slot, so the roundtrip is
/// the identity exactly for interface-complete configurations: ones whose
/// free wires are all listed in the head. A configuration with a globally
/// free name comes back with that wire as an extra head entry.
pub fn net_to_config(net: &PortNet) -> Configuration {
    // roots: nodes whose principal peer is an interface slot or another
    // node's principal port; everything else hangs below a parent
    let mut roots: Vec<NodeId> = Vec::new();
    let mut parent: HashMap<NodeId, NodeId> = HashMap::new();
    for (id, _) in net.nodes() {
        match net.peer(PortRef::node(id, 0)).expect("total net") {
            PortRef::Free { .. } | PortRef::Node { port: 0, .. } => roots.push(id),
            PortRef::Node { node, .. } => {
                parent.insert(id, node);
            }
        }
    }

    // cycles: parent chains that never reach a root
    let mut cycle_reps: Vec<NodeId> = Vec::new();
    let mut done: HashSet<NodeId> = HashSet::new();
    let root_set: HashSet<NodeId> = roots.iter().copied().collect();
    for (start, _) in net.nodes() {
        if done.contains(&start) {
            continue;
        }
        let mut chain: Vec<NodeId> = Vec::new();
        let mut cur = start;
        loop {
            if root_set.contains(&cur) || done.contains(&cur) {
                break;
            }
            if let Some(pos) = chain.iter().position(|n| *n == cur) {
                // a fresh cycle: its nodes are the tail of the chain
                let rep = *chain[pos..].iter().min().unwrap();
                cycle_reps.push(rep);
                break;
            }
            chain.push(cur);
            match parent.get(&cur) {
                Some(p) => cur = *p,
                None => break,
            }
        }
        done.extend(chain);
    }
    cycle_reps.sort_unstable();

    let mut b = ConfigBuilder {
        net,
        names: WireNames::new(),
        cycle_breaks: HashMap::new(),
    };
    for rep in &cycle_reps {
        // the wire entering rep's principal port from its parent is cut and
        // named; the cyclic-tree equation below re-ties it
        let root = PortRef::node(*rep, 0);
        let into = net.peer(root).expect("total net");
        let name = b.names.get(root, into);
        b.cycle_breaks.insert(into, name);
    }

    let mut head = Vec::new();
    for slot in 0..net.interface_len() {
        let p = PortRef::free(slot);
        let q = net.peer(p).expect("total net");
        match q {
            PortRef::Node { node, port: 0 } => head.push(b.build_tree(node)),
            other => head.push(Term::name(b.names.get(p, other))),
        }
    }

    let mut equations = Vec::new();
    for (id, _) in net.nodes() {
        if let Some(PortRef::Node { node, port: 0 }) = net.peer(PortRef::node(id, 0)) {
            if id < node {
                let left = b.build_tree(id);
                let right = b.build_tree(node);
                equations.push(Equation::new(left, right));
            }
        }
    }
    for rep in &cycle_reps {
        let root = PortRef::node(*rep, 0);
        let into = net.peer(root).expect("total net");
        let name = b.cycle_breaks[&into].clone();
        let tree = b.build_tree(*rep);
        equations.push(Equation::new(Term::name(name), tree));
    }

    Configuration::new(head, equations)
}

// ---------------------------------------------------------------------------
// Graph reduction
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphOutcome {
    Normal {
        net: PortNet,
        stats: Stats,
    },
    LimitExceeded {
        net: PortNet,
        stats: Stats,
    },
    Blocked {
        net: PortNet,
        stats: Stats,
        pairs: Vec<(String, String)>,
    },
}

impl GraphOutcome {
    pub fn net(&self) -> &PortNet {
        match self {
            GraphOutcome::Normal { net, .. }
            | GraphOutcome::LimitExceeded { net, .. }
            | GraphOutcome::Blocked { net, .. } => net,
        }
    }

    pub fn stats(&self) -> Stats {
        match self {
            GraphOutcome::Normal { stats, .. }
            | GraphOutcome::LimitExceeded { stats, .. }
            | GraphOutcome::Blocked { stats, .. } => *stats,
        }
    }

    pub fn is_normal(&self) -> bool {
        matches!(self, GraphOutcome::Normal { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            GraphOutcome::Normal { .. } => "normal",
            GraphOutcome::LimitExceeded { .. } => "limit-exceeded",
            GraphOutcome::Blocked { .. } => "blocked",
        }
    }
}

#[derive(Error, Debug, PartialEq, Eq)]
pub enum GraphError {
    #[error("parallel rounds are only defined for deterministic systems; net contains amb agent {0}")]
    AmbPresent(String),
}

fn is_amb_pair(net: &PortNet, pair: &ActivePair) -> bool {
    net.nodes[&pair.a.0].amb || net.nodes[&pair.b.0].amb
}

fn pair_has_rule(net: &PortNet, sig: &Signature, rules: &RuleSet, pair: &ActivePair) -> bool {
    if is_amb_pair(net, pair) {
        return true; // builtin amb rewiring
    }
    let sa = &net.nodes[&pair.a.0].symbol;
    let sb = &net.nodes[&pair.b.0].symbol;
    rules.get(sig, sa, sb).is_some()
}

/// Rewrites one ordinary active pair in place: the two agents are removed
/// and the freshly built right-hand side is spliced onto their auxiliary
/// peers, junction chains collapsing to single wires.
fn rewrite_pair(net: &mut PortNet, sig: &Signature, rules: &RuleSet, pair: &ActivePair) {
    let (n1, n2) = (pair.a.0, pair.b.0);
    let info1 = net.nodes[&n1].clone();
    let info2 = net.nodes[&n2].clone();
    let rule = rules
        .get(sig, &info1.symbol, &info2.symbol)
        .expect("caller checked the rule exists");

    // junction k < m is n1's aux port k+1; junction m+k is n2's aux k+1
    let m = info1.arity;
    let junction_of = |p: &PortRef| -> Option<usize> {
        match p {
            PortRef::Node { node, port } if *node == n1 && *port >= 1 => Some(*port - 1),
            PortRef::Node { node, port } if *node == n2 && *port >= 1 => Some(m + *port - 1),
            _ => None,
        }
    };

    let mut outer: Vec<End> = Vec::with_capacity(m + info2.arity);
    for (node, info) in [(n1, &info1), (n2, &info2)] {
        for port in 1..=info.arity {
            let peer = net.peer(PortRef::node(node, port)).expect("total net");
            outer.push(match junction_of(&peer) {
                Some(j) => End::Junction(j),
                None => End::Port(peer),
            });
        }
    }

    for (node, info) in [(n1, &info1), (n2, &info2)] {
        for port in 0..=info.arity {
            net.unlink(PortRef::node(node, port));
        }
        net.nodes.remove(&node);
    }

    // build the right-hand side; rule names are wires local to this rewrite
    let mut inner: Vec<Option<End>> = vec![None; outer.len()];
    let mut name_ends: HashMap<String, Vec<End>> = HashMap::new();
    for (k, term) in rule
        .left_args
        .iter()
        .chain(rule.right_args.iter())
        .enumerate()
    {
        match term {
            Term::Name(x) => name_ends.entry(x.clone()).or_default().push(End::Junction(k)),
            Term::Agent { .. } => {
                let root = graft_tree(net, sig, term, &mut |x, p| {
                    name_ends.entry(x.to_string()).or_default().push(End::Port(p));
                });
                inner[k] = Some(End::Port(root));
            }
        }
    }
    let mut extra: Vec<[End; 2]> = Vec::new();
    for (name, occ) in name_ends {
        assert_eq!(occ.len(), 2, "rule name {name} must occur exactly twice");
        match (occ[0], occ[1]) {
            (End::Junction(i), End::Junction(j)) => {
                inner[i] = Some(End::Junction(j));
                inner[j] = Some(End::Junction(i));
            }
            (End::Junction(i), p @ End::Port(_)) | (p @ End::Port(_), End::Junction(i)) => {
                inner[i] = Some(p);
            }
            (a @ End::Port(_), b @ End::Port(_)) => extra.push([a, b]),
        }
    }

    let mut ends: Vec<[End; 2]> = outer
        .into_iter()
        .zip(inner)
        .map(|(o, i)| [o, i.expect("every rule position wires somewhere")])
        .collect();
    ends.extend(extra);
    resolve_junctions(net, &ends);
}

/// Rewrites an Amb active pair: the peer agent's principal wire moves to
/// Amb's m port (slot 2), and Amb's other principal wire joins the a port
/// (slot 3). The pair interface is preserved exactly.
fn rewrite_amb(net: &mut PortNet, pair: &ActivePair) {
    // when both nodes are amb the smaller node id is the one consumed
    let (amb, fired_port, peer) = if net.nodes[&pair.a.0].amb {
        (pair.a.0, pair.a.1, pair.b)
    } else {
        (pair.b.0, pair.b.1, pair.a)
    };
    let other_principal = 1 - fired_port;

    // junctions: 0 = other principal, 1 = m port, 2 = a port
    let ports = [other_principal, 2, 3];
    let junction_of = |p: &PortRef| -> Option<usize> {
        match p {
            PortRef::Node { node, port } if *node == amb => ports.iter().position(|q| q == port),
            _ => None,
        }
    };
    let outer: Vec<End> = ports
        .iter()
        .map(|port| {
            let q = net.peer(PortRef::node(amb, *port)).expect("total net");
            match junction_of(&q) {
                Some(j) => End::Junction(j),
                None => End::Port(q),
            }
        })
        .collect();
    for port in 0..=3 {
        net.unlink(PortRef::node(amb, port));
    }
    net.nodes.remove(&amb);

    let ends = [
        [outer[0], End::Junction(2)],                      // other principal joins a
        [outer[1], End::Port(PortRef::node(peer.0, peer.1))], // peer agent moves to m
        [outer[2], End::Junction(0)],                      // a joins other principal
    ];
    resolve_junctions(net, &ends);
}

/// Reduces a net by rewriting active pairs. Ordinary pairs use the rule set
/// and agree with the calculus engine; Amb pairs use the builtin rewiring.
/// With `fairness` on, pairs are served oldest first and only pairs whose
/// component can reach the interface are eligible; work that can never
/// influence the result is dropped once the rest is quiescent.
pub fn graph_reduce(
    mut net: PortNet,
    sig: &Signature,
    rules: &RuleSet,
    policy: SchedulerPolicy,
    fairness: bool,
    limit: u64,
) -> GraphOutcome {
    let mut stats = Stats::default();
    let mut rng = match policy {
        SchedulerPolicy::RandomSeeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut birth: HashMap<ActivePair, u64> = HashMap::new();
    let mut clock: u64 = 0;

    loop {
        let pairs = net.active_pairs();
        birth.retain(|p, _| pairs.binary_search(p).is_ok());
        for p in &pairs {
            birth.entry(*p).or_insert_with(|| {
                clock += 1;
                clock
            });
        }
        let eligible: Vec<ActivePair> = if fairness && net.interface_len() > 0 {
            let connected = net.interface_connected();
            pairs
                .iter()
                .filter(|p| connected.contains(&p.a.0) || connected.contains(&p.b.0))
                .copied()
                .collect()
        } else {
            pairs.clone()
        };
        let reducible: Vec<ActivePair> = eligible
            .iter()
            .filter(|p| pair_has_rule(&net, sig, rules, p))
            .copied()
            .collect();

        if reducible.is_empty() {
            let blocked: BTreeSet<(String, String)> = eligible
                .iter()
                .map(|p| {
                    crate::model::pair_key(&net.nodes[&p.a.0].symbol, &net.nodes[&p.b.0].symbol)
                })
                .collect();
            if !blocked.is_empty() {
                return GraphOutcome::Blocked {
                    net,
                    stats,
                    pairs: blocked.into_iter().collect(),
                };
            }
            if fairness {
                net.drop_disconnected();
            }
            return GraphOutcome::Normal { net, stats };
        }
        if stats.total() >= limit {
            return GraphOutcome::LimitExceeded { net, stats };
        }

        let chosen = if fairness {
            *reducible.iter().min_by_key(|p| (birth[p], **p)).unwrap()
        } else {
            match policy {
                SchedulerPolicy::Fifo | SchedulerPolicy::InteractionFirst => {
                    *reducible.iter().min_by_key(|p| (birth[p], **p)).unwrap()
                }
                SchedulerPolicy::Lifo => *reducible.iter().max_by_key(|p| (birth[p], **p)).unwrap(),
                SchedulerPolicy::RandomSeeded(_) => {
                    let i = rng.as_mut().unwrap().gen_range(0..reducible.len());
                    reducible[i]
                }
            }
        };
        birth.remove(&chosen);
        if is_amb_pair(&net, &chosen) {
            rewrite_amb(&mut net, &chosen);
        } else {
            rewrite_pair(&mut net, sig, rules, &chosen);
        }
        stats.interactions += 1;
    }
}

/// Rewrites every currently active pair once. The pairs are node-disjoint by
/// construction (each ordinary node has a single principal port), so the
/// rewrites commute; pairs without a rule are left in place. Returns the
/// number of rewrites performed.
pub fn parallel_round(net: &mut PortNet, sig: &Signature, rules: &RuleSet) -> Result<usize, GraphError> {
    if let Some((_, info)) = net.nodes().find(|(_, info)| info.amb) {
        return Err(GraphError::AmbPresent(info.symbol.clone()));
    }
    let pairs: Vec<ActivePair> = net
        .active_pairs()
        .into_iter()
        .filter(|p| pair_has_rule(net, sig, rules, p))
        .collect();
    let mut seen: HashSet<NodeId> = HashSet::new();
    for p in &pairs {
        assert!(
            seen.insert(p.a.0) && seen.insert(p.b.0),
            "active pairs must be node-disjoint"
        );
    }
    let n = pairs.len();
    for pair in pairs {
        rewrite_pair(net, sig, rules, &pair);
    }
    Ok(n)
}

/// Drives [`parallel_round`] to quiescence, returning (rounds, rewrites).
pub fn parallel_reduce(
    net: &mut PortNet,
    sig: &Signature,
    rules: &RuleSet,
    max_rounds: u64,
) -> Result<(u64, u64), GraphError> {
    let mut rounds = 0;
    let mut rewrites = 0;
    while rounds < max_rounds {
        let n = parallel_round(net, sig, rules)?;
        if n == 0 {
            break;
        }
        rounds += 1;
        rewrites += n as u64;
    }
    Ok((rounds, rewrites))
}

// ---------------------------------------------------------------------------
// JSON form
// ---------------------------------------------------------------------------

fn end_to_json(p: PortRef) -> serde_json::Value {
    match p {
        PortRef::Node { node, port } => serde_json::json!([node.to_string(), port]),
        PortRef::Free { slot } => serde_json::json!(["free", slot]),
    }
}

/// Emits the numbered-port JSON form: node ids to symbols, node-to-node
/// wires, and the ordered interface as the peer of each slot (`["free", j]`
/// when a slot is wired straight to another slot).
pub fn net_to_json(net: &PortNet) -> serde_json::Value {
    let nodes: BTreeMap<String, String> = net
        .nodes()
        .map(|(id, info)| (id.to_string(), info.symbol.clone()))
        .collect();
    let wires: Vec<serde_json::Value> = net
        .wires()
        .into_iter()
        .filter(|(a, b)| matches!(a, PortRef::Node { .. }) && matches!(b, PortRef::Node { .. }))
        .map(|(a, b)| serde_json::json!([end_to_json(a), end_to_json(b)]))
        .collect();
    let interface: Vec<serde_json::Value> = (0..net.interface_len())
        .map(|slot| end_to_json(net.peer(PortRef::free(slot)).expect("total net")))
        .collect();
    serde_json::json!({
        "nodes": nodes,
        "wires": wires,
        "interface": interface,
    })
}

fn end_from_json(v: &serde_json::Value) -> Result<PortRef, String> {
    let arr = v.as_array().ok_or("endpoint must be a two-element array")?;
    if arr.len() != 2 {
        return Err("endpoint must be a two-element array".into());
    }
    let id = arr[0].as_str().ok_or("endpoint id must be a string")?;
    let port = arr[1].as_u64().ok_or("endpoint port must be a number")? as usize;
    if id == "free" {
        Ok(PortRef::free(port))
    } else {
        let node: NodeId = id.parse().map_err(|_| format!("bad node id {id:?}"))?;
        Ok(PortRef::node(node, port))
    }
}

/// Parses the JSON net form. Arities and amb-ness come from the signature;
/// the net is checked for totality before being returned.
pub fn net_from_json(v: &serde_json::Value, sig: &Signature) -> Result<PortNet, String> {
    let nodes = v
        .get("nodes")
        .and_then(|n| n.as_object())
        .ok_or("missing \"nodes\" object")?;
    let mut net = PortNet::new(0);
    let mut next_id: NodeId = 0;
    for (id, symbol) in nodes {
        let id: NodeId = id.parse().map_err(|_| format!("bad node id {id:?}"))?;
        let symbol = symbol.as_str().ok_or("node symbol must be a string")?;
        let arity = sig
            .arity(symbol)
            .ok_or_else(|| format!("undeclared symbol {symbol}"))?;
        net.nodes.insert(
            id,
            NodeInfo {
                symbol: symbol.to_string(),
                arity,
                amb: sig.attr(symbol) == Some(SymbolAttr::Amb),
            },
        );
        next_id = next_id.max(id + 1);
    }
    net.next_id = next_id;
    let interface = v
        .get("interface")
        .and_then(|n| n.as_array())
        .ok_or("missing \"interface\" array")?;
    net.n_free = interface.len();
    for (slot, entry) in interface.iter().enumerate() {
        let peer = end_from_json(entry)?;
        if let PortRef::Free { slot: j } = peer {
            if j == slot {
                return Err(format!("interface slot {slot} wired to itself"));
            }
            if j < slot {
                // mutual pair, already linked from the smaller slot
                if net.peer(PortRef::free(slot)) != Some(peer) {
                    return Err(format!("interface slots {j} and {slot} disagree"));
                }
                continue;
            }
        }
        net.try_link(PortRef::free(slot), peer)?;
    }
    let wires = v
        .get("wires")
        .and_then(|n| n.as_array())
        .ok_or("missing \"wires\" array")?;
    for w in wires {
        let arr = w.as_array().ok_or("wire must be a two-element array")?;
        if arr.len() != 2 {
            return Err("wire must be a two-element array".into());
        }
        net.try_link(end_from_json(&arr[0])?, end_from_json(&arr[1])?)?;
    }
    net.check()?;
    Ok(net)
}
