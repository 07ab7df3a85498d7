//! Random goal models that pass validation, for round-trip and export checks.

use msr_core::benchmark::BenchmarkSource;
use msr_core::goal::{
    AgentSpec, AssetSpec, AssetType, DescriptionSpec, DomainPropertySpec, Edge, EdgeKind, GoalGraph,
    GoalThresholds, Node, NodeSpec, ObstacleSpec, RefinementMode, ResilienceGoalSpec,
};
use msr_core::measure::Disruption;
use msr_core::series::{AttributeSpec, Orientation};
use rand::seq::SliceRandom;
use rand::Rng;

const NAME_PARTS: &[&str] = &[
    "order", "Payment", "cart \"hot\" path", "back\\slash", "line\nbreak", "Größe", "延迟", "tab\tstop", "{braces}",
    "a;b", "x->y", "",
];

fn name<R: Rng>(rng: &mut R) -> String {
    let n = rng.gen_range(1..=3);
    (0..n).map(|_| *NAME_PARTS.choose(rng).unwrap()).collect::<Vec<_>>().join(" ")
}

fn maybe_text<R: Rng>(rng: &mut R) -> Option<String> {
    rng.gen_bool(0.5).then(|| name(rng))
}

fn value<R: Rng>(rng: &mut R) -> f64 {
    // Mix of round numbers and arbitrary doubles.
    if rng.gen_bool(0.5) {
        rng.gen_range(1..1000) as f64
    } else {
        rng.gen_range(1e-6..1e6)
    }
}

fn thresholds<R: Rng>(rng: &mut R) -> GoalThresholds {
    loop {
        let t = GoalThresholds {
            dt_max: rng.gen_bool(0.5).then(|| value(rng)),
            rr_max: rng.gen_bool(0.5).then(|| value(rng)),
            pl_max: rng.gen_bool(0.5).then(|| value(rng)),
        };
        if !t.is_empty() {
            return t;
        }
    }
}

/// A random model with services, pods, benchmarks, measured and composite goals,
/// AND/OR refinements (children always older than parents, so acyclic),
/// mechanisms with behaviours and agents, and obstacles with supersession.
pub fn random_graph<R: Rng>(rng: &mut R) -> GoalGraph {
    let mut g = GoalGraph::new(name(rng));
    g.metadata.iteration = maybe_text(rng);
    let add = |g: &mut GoalGraph, id: String, name: String, spec: NodeSpec| {
        g.add_node(Node::new(id, name, spec)).expect("fresh id");
    };

    let n_attr = rng.gen_range(1..=3);
    for a in 0..n_attr {
        let orientation = if rng.gen_bool(0.5) {
            Orientation::HigherIsBetter
        } else {
            Orientation::LowerIsBetter
        };
        g.add_attribute(AttributeSpec::new(format!("attr-{a}"), name(rng), "u", orientation, "u·s"))
            .unwrap();
        let spec = DomainPropertySpec {
            description: name(rng),
            references: (0..rng.gen_range(0..3)).map(|_| name(rng)).collect(),
            benchmark: Some(BenchmarkSource::Constant(value(rng))),
        };
        add(&mut g, format!("bench-{a}"), name(rng), NodeSpec::DomainProperty(spec));
    }

    let n_svc = rng.gen_range(1..=3);
    let mut assets = Vec::new();
    for s in 0..n_svc {
        let svc = format!("svc-{s}");
        let pod = format!("svc-{s}-pod");
        add(&mut g, svc.clone(), name(rng), NodeSpec::Asset(AssetSpec { asset_type: AssetType::Service }));
        let rtype = *[AssetType::Pod, AssetType::Container, AssetType::Database, AssetType::VirtualMachine]
            .choose(rng)
            .unwrap();
        add(&mut g, pod.clone(), name(rng), NodeSpec::Asset(AssetSpec { asset_type: rtype }));
        g.add_edge(Edge::new(EdgeKind::Dependency, &svc, &pod));
        assets.push((svc, true));
        assets.push((pod, false));
    }

    // Goals, oldest first.
    let mut goals: Vec<String> = Vec::new();
    let n_goals = rng.gen_range(1..=8);
    let mut group_seq = 0;
    for k in 0..n_goals {
        let id = format!("goal-{k}");
        let (asset, is_service) = assets.choose(rng).unwrap().clone();
        let refine = !goals.is_empty() && rng.gen_bool(0.5);
        let composite = refine && rng.gen_bool(0.5);
        let mut spec = if composite {
            ResilienceGoalSpec::composite(&asset)
        } else {
            ResilienceGoalSpec::measured(&asset, format!("attr-{}", rng.gen_range(0..n_attr)), thresholds(rng))
        };
        spec.description = maybe_text(rng);
        let bench = spec.attribute.as_ref().map(|a| a.replace("attr-", "bench-"));
        let node_spec = if is_service {
            NodeSpec::ServiceResilienceGoal(spec)
        } else {
            NodeSpec::ResourceResilienceGoal(spec)
        };
        add(&mut g, id.clone(), name(rng), node_spec);
        g.add_edge(Edge::new(EdgeKind::Concern, &id, &asset));
        if let Some(b) = bench {
            g.add_edge(Edge::new(EdgeKind::Reference, &id, b));
        }
        if refine {
            for _ in 0..rng.gen_range(1..=2) {
                let mode = if rng.gen_bool(0.5) { RefinementMode::And } else { RefinementMode::Or };
                let mut children = goals.clone();
                children.shuffle(rng);
                children.truncate(rng.gen_range(1..=goals.len().min(3)));
                group_seq += 1;
                for c in children {
                    g.add_edge(Edge::refinement(&id, c, format!("{id}/g{group_seq}"), mode));
                }
            }
        }
        goals.push(id);
    }

    // Obstacles, each obstructing a goal; some diagnosed, some superseded by a later one.
    let n_obs = rng.gen_range(0..=3);
    let mut obstacles: Vec<String> = Vec::new();
    for o in 0..n_obs {
        let id = format!("obs-{o}");
        let diagnosed = rng.gen_bool(0.5);
        let (asset, _) = assets.choose(rng).unwrap().clone();
        let spec = ObstacleSpec {
            event: name(rng),
            diagnosed,
            disruption: (diagnosed && rng.gen_bool(0.5)).then(|| Disruption {
                object: asset.clone(),
                event_type: name(rng),
                occurred_at: rng.gen_bool(0.5).then(|| value(rng)),
                evidence: (0..rng.gen_range(0..3)).map(|_| name(rng)).collect(),
            }),
            superseded_by: None,
        };
        add(&mut g, id.clone(), name(rng), NodeSpec::Obstacle(spec));
        g.add_edge(Edge::new(EdgeKind::Obstruction, &id, goals.choose(rng).unwrap()));
        if diagnosed {
            g.add_edge(Edge::new(EdgeKind::Affects, &id, &asset));
        }
        if let Some(prev) = obstacles.last() {
            if rng.gen_bool(0.3) {
                let prev = prev.clone();
                if let NodeSpec::Obstacle(spec) = &mut g.node_mut(&prev).unwrap().spec {
                    spec.superseded_by = Some(id.clone());
                }
            }
        }
        obstacles.push(id);
    }

    // Mechanisms resolving obstacles, OR-refined into behaviours with agents.
    for (m, obs) in obstacles.iter().enumerate() {
        if !rng.gen_bool(0.6) {
            continue;
        }
        let mech = format!("mech-{m}");
        add(
            &mut g,
            mech.clone(),
            name(rng),
            NodeSpec::MechanismGoal(DescriptionSpec { description: maybe_text(rng) }),
        );
        g.add_edge(Edge::new(EdgeKind::Resolution, &mech, obs));
        let mode = if rng.gen_bool(0.5) { RefinementMode::And } else { RefinementMode::Or };
        for b in 0..rng.gen_range(1..=3) {
            let beh = format!("{mech}-beh-{b}");
            let agent = format!("{mech}-agent-{b}");
            add(
                &mut g,
                beh.clone(),
                name(rng),
                NodeSpec::SystemBehavior(DescriptionSpec { description: maybe_text(rng) }),
            );
            add(&mut g, agent.clone(), name(rng), NodeSpec::Agent(AgentSpec { agent_type: name(rng) }));
            g.add_edge(Edge::new(EdgeKind::Responsibility, &agent, &beh));
            g.add_edge(Edge::refinement(&mech, &beh, format!("{mech}/behaviours"), mode));
        }
        if rng.gen_bool(0.5) {
            if let Some(parent) = goals.choose(rng) {
                g.add_edge(Edge::refinement(parent, &mech, format!("{parent}/mechanisms"), RefinementMode::Or));
            }
        }
    }

    g.nodes.shuffle(rng);
    g.edges.shuffle(rng);
    g
}
