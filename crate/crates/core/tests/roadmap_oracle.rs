use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use starnav::*;

fn circle(c: Point2d, r: f64) -> Regiond {
    Regiond::circle(RegionId(0), c, r)
}

// Exhaustive simple-path enumeration over non-stuck nodes.
fn enumerate(rm: &Roadmapd, at: NodeId, to: NodeId, seen: &mut Vec<NodeId>, cost: f64, best: &mut f64) {
    if at == to {
        *best = best.min(cost);
        return;
    }
    for &nb in rm.neighbours(at) {
        if seen.contains(&nb) || rm.node(nb).unwrap().status == NodeStatus::Stuck {
            continue;
        }
        seen.push(nb);
        let step = rm.node(at).unwrap().position.distance(rm.node(nb).unwrap().position);
        enumerate(rm, nb, to, seen, cost + step, best);
        seen.pop();
    }
}

fn random_roadmap(rng: &mut ChaCha8Rng) -> Roadmapd {
    let n = rng.random_range(2..=8);
    let root = Point2d::new(rng.random_range(0.0..10.0), rng.random_range(0.0..10.0));
    let mut rm = Roadmapd::new(root, circle(root, 0.5)).unwrap();
    for i in 1..n {
        let id = rm.add_node(Point2d::new(rng.random_range(0.0..10.0), rng.random_range(0.0..10.0)));
        let parent = NodeId(rng.random_range(0..i) as u32);
        rm.add_edge(parent, id).unwrap();
    }
    for _ in 0..rng.random_range(0..n) {
        let a = NodeId(rng.random_range(0..n) as u32);
        let b = NodeId(rng.random_range(0..n) as u32);
        if a != b {
            rm.add_edge(a, b).unwrap();
        }
    }
    for i in 1..n {
        if rng.random_bool(0.2) {
            rm.mark_stuck(NodeId(i as u32)).unwrap();
        }
    }
    rm
}

#[test]
fn shortest_path_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..100 {
        let rm = random_roadmap(&mut rng);
        let n = rm.nodes().len();
        for to in 0..n {
            let to = NodeId(to as u32);
            let mut best = f64::INFINITY;
            if rm.node(to).unwrap().status != NodeStatus::Stuck {
                enumerate(&rm, rm.root(), to, &mut vec![rm.root()], 0.0, &mut best);
            }
            match rm.shortest_path(rm.root(), to) {
                Some((cost, path)) => {
                    assert!((cost - best).abs() < 1e-9, "cost {cost} oracle {best}");
                    assert!(path.iter().all(|id| rm.node(*id).unwrap().status != NodeStatus::Stuck));
                }
                None => assert!(best.is_infinite()),
            }
        }
    }
}

#[test]
fn exploration_target_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let goal = Point2d::new(100.0, 50.0);
    for _ in 0..100 {
        let rm = random_roadmap(&mut rng);
        let robot = rm.node(rm.root()).unwrap().position;
        // virtual start links: non-stuck nodes inside the root region
        let links: Vec<NodeId> = rm
            .nodes()
            .iter()
            .filter(|n| n.status != NodeStatus::Stuck && n.position.distance(robot) <= 0.5)
            .map(|n| n.id)
            .collect();
        let mut oracle = f64::INFINITY;
        for n in rm.nodes().iter().filter(|n| n.status == NodeStatus::Extendable) {
            for &l in &links {
                let mut best = f64::INFINITY;
                enumerate(&rm, l, n.id, &mut vec![l], 0.0, &mut best);
                let via = robot.distance(rm.node(l).unwrap().position) + best;
                oracle = oracle.min(via + n.position.distance(goal));
            }
        }
        match rm.plan_short_term_goal(robot, goal) {
            Ok(sg) => {
                let target = *sg.path.last().unwrap();
                let got = sg.cost + rm.node(target).unwrap().position.distance(goal);
                assert!((got - oracle).abs() < 1e-9, "got {got} oracle {oracle}");
                assert!(!sg.reaches_goal);
                assert_eq!(sg.target, rm.node(sg.path[0]).unwrap().position);
            }
            Err(RoadmapError::NoPath) => assert!(oracle.is_infinite()),
            Err(e) => panic!("{e}"),
        }
    }
}

#[test]
fn chain_plan_visits_f1_then_f2() {
    let root = Point2d::zero();
    let mut rm = Roadmapd::new(root, circle(root, 1.2)).unwrap();
    let f1 = rm.add_node(Point2d::new(1.0, 0.0));
    let f2 = rm.add_node(Point2d::new(2.0, 0.0));
    rm.add_edge(rm.root(), f1).unwrap();
    rm.add_edge(f1, f2).unwrap();
    rm.set_expanded(f1, circle(Point2d::new(1.0, 0.0), 1.2)).unwrap();
    rm.set_expanded(f2, circle(Point2d::new(2.0, 0.0), 1.2)).unwrap();
    let goal = Point2d::new(3.0, 0.0);
    let sg = rm.plan_short_term_goal(Point2d::new(-0.5, 0.0), goal).unwrap();
    assert_eq!(sg.path, vec![f1, f2]);
    assert_eq!(sg.target, Point2d::new(1.0, 0.0));
    assert!(sg.reaches_goal);
    assert!((sg.cost - 3.5).abs() < 1e-12);
}

#[test]
fn stuck_nodes_never_planned_through() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let goal = Point2d::new(-40.0, 20.0);
    for _ in 0..200 {
        let mut rm = random_roadmap(&mut rng);
        let robot = rm.node(rm.root()).unwrap().position;
        while let Ok(sg) = rm.plan_short_term_goal(robot, goal) {
            for id in &sg.path {
                assert_ne!(rm.node(*id).unwrap().status, NodeStatus::Stuck);
            }
            let target = *sg.path.last().unwrap();
            rm.mark_stuck(target).unwrap();
            assert!(rm.take_replan());
            assert!(!rm.take_replan());
        }
        // whatever is still extendable is cut off by stuck nodes
        let links: Vec<NodeId> = rm
            .nodes()
            .iter()
            .filter(|n| n.status != NodeStatus::Stuck && n.position.distance(robot) <= 0.5)
            .map(|n| n.id)
            .collect();
        for n in rm.nodes().iter().filter(|n| n.status == NodeStatus::Extendable) {
            assert!(links.iter().all(|&l| rm.shortest_path(l, n.id).is_none()));
        }
    }
}
