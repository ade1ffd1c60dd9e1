"""Poke the Mamdani ranking system directly: metrics in, quality out.

The ranking sees three normalized measures of a plan: the feasible fraction,
orientation stability, and gripper stability.  Feasibility dominates by rule
design; the stability inputs only differentiate among comparable plans.

Run:  python3 demos/03_fuzzy_ranking.py
"""

from adplan import PlanMetrics, build_ranking_system, fuzzy_fitness, normalized_measures


def main() -> None:
    system = build_ranking_system()

    print("raw inference on the three normalized inputs:")
    for lN, o, g in [(1.0, 1.0, 1.0), (1.0, 1.0, 0.0), (0.5, 0.5, 0.5),
                     (0.25, 1.0, 1.0), (0.0, 0.0, 0.0)]:
        q = system.infer({
            "feasible_fraction": lN,
            "orientation_stability": o,
            "gripper_stability": g,
        })
        print(f"  feasible {lN:4.2f}  orient {o:4.2f}  grip {g:4.2f}  ->  quality {q:.3f}")

    print("\nthe same scale applied to whole-plan metrics (8-part product):")
    cases = [
        ("perfect plan", PlanMetrics(8, 0, 0, 8)),
        ("feasible, many tool swaps", PlanMetrics(8, 2, 6, 8)),
        ("half feasible", PlanMetrics(4, 1, 1, 8)),
        ("stuck at the first step", PlanMetrics(0, 0, 0, 8)),
    ]
    for label, m in cases:
        inputs = normalized_measures(m)
        shown = ", ".join(f"{v:.2f}" for v in inputs.values())
        print(f"  {label:<28} inputs ({shown})  ->  {fuzzy_fitness(m, system):.3f}")

    print("\nfeasibility dominates: improving only stability never rescues an"
          "\ninfeasible plan, and a fully feasible plan never ranks below one"
          "\nthat is not.")


if __name__ == "__main__":
    main()
