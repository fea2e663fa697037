use super::*;
use alloc::vec;

use crate::agents::{GreedyCop, RandomCop};
use crate::engine::{run, Outcome, RunConfig, Trace};
use crate::homothety::LamplighterFamily;
use crate::space::LampVertex;

fn g(x: i64, y: i64) -> Vertex {
    Vertex::Grid(vec![x, y])
}

fn failures(t: &Trace) -> Vec<String> {
    t.assertions.iter().filter(|a| !a.pass).map(|a| format!("{} @{}: {}", a.name, a.stage, a.detail)).collect()
}

fn checked(t: &Trace, prefix: &str) -> usize {
    t.assertions.iter().filter(|a| a.name.starts_with(prefix)).count()
}

#[test]
fn cop_parameters_from_distortion() {
    assert_eq!(derived_cop_params(Q::from_integer(1), Q::from_integer(0)), (4, 8));
    assert_eq!(derived_cop_params(Q::from_integer(1), Q::from_integer(2)), (10, 32));
    // 4·(9/4) + 3·(3/2)·(1/3) = 10.5 → 11; 4·(3/2)·(3 + 1) = 24.
    assert_eq!(derived_cop_params(Q::new(3, 2), Q::new(1, 3)), (11, 24));
}

#[test]
fn lamplighter_preset_parameters() {
    let s = LamplighterFamily::cyclic(2).unwrap().gamma().clone();
    let cfg = RunConfig { cops: 1, horizon: 6, seed: 0, fail_fast: false };
    let mut r = lamplighter_meta_robber(2).unwrap();
    let t = run(&s, Variant::Strong, &mut GreedyCop::new(1, 2), &mut r, &cfg).unwrap();
    assert_eq!(r.params, Some(OracleParams { sigma_bar: 10, rho_bar: 32, psi_bar: 90, radius_bar: 90 }));
    assert_eq!((t.params.psi, t.params.radius), (92, 196));
    assert_eq!((r.j, r.rho_prime, r.lambda), (2, 2, 2));
    assert!(matches!(t.outcome, Outcome::HorizonReached { .. }), "{:?}", t.outcome);
    assert_eq!(failures(&t), Vec::<String>::new());
    assert_eq!(r.meta_stages_checked, 3);
    // Each Δ step of the loop is a Γ segment of length j.
    let walk: u64 = t.stages[1..3].iter().map(|s| s.robber_move.0.len() as u64 - 1).sum();
    assert_eq!(walk, 180);
}

#[test]
fn z2_preset_parameters_and_play() {
    let s = Space::grid(2).unwrap();
    for (rho, seed) in [(4, 0), (8, 1)] {
        let cfg = RunConfig { cops: 1, horizon: 16 * rho, seed, fail_fast: false };
        let mut r = z2_meta_robber();
        let t = run(&s, Variant::Strong, &mut GreedyCop::new(1, rho), &mut r, &cfg).unwrap();
        assert_eq!(t.params.psi, 48);
        assert_eq!(t.params.radius, 48 * rho);
        assert_eq!(r.lambda, rho);
        assert!(matches!(t.outcome, Outcome::HorizonReached { .. }), "{:?}", t.outcome);
        assert_eq!(failures(&t), Vec::<String>::new());
        assert!(r.meta_stages_checked >= 15);
        assert!(checked(&t, "meta-z2-offset") >= 15);
    }
}

#[test]
fn z2_preset_rounds_reach_to_speed() {
    let s = Space::grid(2).unwrap();
    let cfg = RunConfig { cops: 2, horizon: 30, seed: 3, fail_fast: false };
    let mut r = z2_meta_robber();
    let t = run(&s, Variant::Strong, &mut RandomCop::new(2, 5), &mut r, &cfg).unwrap();
    assert_eq!((r.rho_prime, r.lambda, t.params.psi), (6, 3, 96));
    assert_eq!(failures(&t), Vec::<String>::new());
}

#[test]
fn general_reduction_on_the_plane() {
    let s = Space::grid(2).unwrap();
    let fam = Z2ScalingFamily::new(vec![2, 4, 8]).unwrap();
    let mut r = MetaRobber::new(
        Box::new(fam),
        Box::new(|| Box::new(crate::agents::GreedyEvader::new(8, 20, 40).confined_to(g(0, 0), 40))),
    );
    let cfg = RunConfig { cops: 1, horizon: 24, seed: 0, fail_fast: false };
    let t = run(&s, Variant::Strong, &mut GreedyCop::new(1, 3), &mut r, &cfg).unwrap();
    assert_eq!(r.params.map(|p| (p.sigma_bar, p.rho_bar)), Some((4, 8)));
    assert_eq!((r.j, r.rho_prime, r.lambda), (2, 4, 4));
    assert_eq!(t.params.psi, 20);
    assert_eq!(t.params.radius, 4 * (40 + 2));
    assert_eq!(failures(&t), Vec::<String>::new());
}

#[test]
fn weak_game_is_refused() {
    let s = Space::grid(2).unwrap();
    let cfg = RunConfig { cops: 1, horizon: 4, seed: 0, fail_fast: false };
    let t = run(&s, Variant::Weak, &mut GreedyCop::new(1, 1), &mut z2_meta_robber(), &cfg).unwrap();
    assert!(matches!(t.outcome, Outcome::Forfeit { .. }), "{:?}", t.outcome);
}

fn lamp_record() -> (LamplighterFamily, MetaStageRecord, ObligationBounds) {
    let fam = LamplighterFamily::cyclic(2).unwrap();
    let lamp = |q: &[i64], pos| {
        let mut v = LampVertex { pos, ..Default::default() };
        for &k in q {
            v.set_lamp(k, 1);
        }
        Vertex::Lamp(v)
    };
    let r0 = lamp(&[2, 88], 2);
    let rec = MetaStageRecord {
        meta_stage: 1,
        first_stage: 1,
        oracle_path: vec![],
        waypoints: vec![r0.clone(), lamp(&[88], 4)],
        walk_len: 2,
        cops_start: vec![lamp(&[], 0)],
        cops_end: vec![lamp(&[], 1)],
        robber_checkpoints: vec![r0, lamp(&[88], 3), lamp(&[88], 4)],
        cop_checkpoints: vec![lamp(&[], 0), lamp(&[], 1)],
    };
    let b = ObligationBounds {
        j: 2,
        lambda: 2,
        psi: 92,
        sigma: 1,
        rho_prime: 2,
        sigma_bar: 10,
        radius: 196,
        treasure: lamp(&[], 0),
    };
    (fam, rec, b)
}

#[test]
fn obligations_hold_on_an_honest_record() {
    let (fam, rec, b) = lamp_record();
    let checks = assert_meta_obligations(&rec, &fam, &b).unwrap();
    assert_eq!(checks.len(), 6);
    assert!(checks.iter().all(|c| c.pass), "{checks:?}");
}

// Mutation: a cop that jumps far between meta-stage boundaries breaks the
// projected-speed obligation and nothing else.
#[test]
fn teleporting_cop_breaks_projected_speed() {
    let (fam, mut rec, b) = lamp_record();
    rec.cops_end = vec![Vertex::Lamp(LampVertex { pos: -60, ..Default::default() })];
    let checks = assert_meta_obligations(&rec, &fam, &b).unwrap();
    let failed: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.name).collect();
    assert_eq!(failed, vec!["meta-b-cop-projection"]);
}

#[test]
fn close_cop_breaks_separation() {
    let (fam, mut rec, b) = lamp_record();
    rec.cop_checkpoints.push(rec.robber_checkpoints[1].clone());
    let checks = assert_meta_obligations(&rec, &fam, &b).unwrap();
    assert!(checks.iter().any(|c| c.name == "meta-c-separation" && !c.pass));
}

#[test]
fn long_walk_breaks_reach() {
    let (fam, mut rec, mut b) = lamp_record();
    b.psi = 0;
    rec.walk_len = 5;
    let checks = assert_meta_obligations(&rec, &fam, &b).unwrap();
    assert!(checks.iter().any(|c| c.name == "meta-a-walk" && !c.pass));
    assert!(checks.iter().any(|c| c.name == "meta-a-reach" && !c.pass));
}
