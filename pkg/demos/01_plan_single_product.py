"""Plan the disassembly of one packaged product and print the best plan.

Run:  python3 demos/01_plan_single_product.py
"""

from importlib import resources
from pathlib import Path

from adplan import FitnessMode, GAConfig, Weights, evolve, load_product

FIXTURES = Path(str(resources.files("adplan") / "fixtures"))


def main() -> None:
    model = load_product(FIXTURES / "cage5.json")
    print(f"product: {model.name} ({model.n} components, "
          f"directions {', '.join(model.directions)})")

    config = GAConfig(
        population_size=60,
        mutation_prob=0.8,
        crossover_rate=0.4,
        max_generations=150,
        mode=FitnessMode.ALGEBRAIC,
        weights=Weights(2.0, 1.0, 1.0),
        seed=1,
    )
    result = evolve(model, config)
    m = result.best_metrics

    print(f"best fitness: {result.best_fitness} after {len(result.stats)} generations")
    print(f"feasible steps: {m.feasible_len}/{m.n_parts}, "
          f"{m.orient_changes} orientation changes, {m.grip_changes} gripper changes")
    print("\ndisassembly plan:")
    for pos, part in enumerate(result.best.sequence):
        d = model.directions[result.best.directions[pos]]
        grip = model.gripper_catalog[result.best.grippers[pos]]
        print(f"  {pos + 1}. remove {model.part_names[part]:<8} along {d:3} with {grip}")


if __name__ == "__main__":
    main()
