"""
Checking the inequalities on random instances
=============================================

Every generated instance goes through the full list of checks: closure
of admissible measures, the score representation, linearization,
Khintchine and Laplace ordering, and the two homogenization bounds.
"""

from tvhom.harness import GeneratorConfig, gen_instance, run_suite, verify_instance

cfg = GeneratorConfig(seed=42, count=200)
print(gen_instance(cfg, 0).to_json())

# a single report, tightest margins first
r = verify_instance(gen_instance(cfg, 0), instance_id=0)
for c in sorted(r.checks, key=lambda c: c.margin)[:6]:
    print(f"{c.name:32s} lhs={c.lhs:.6g} rhs={c.rhs:.6g} margin={c.margin:.3g}")
print(r.quantities)

res = run_suite(cfg)
s = res.summary
print("instances", s["instances"], "failed checks", s["failed_checks"], "max ratio", s["max_ratio"])
for name, st in sorted(s["checks"].items(), key=lambda kv: kv[1]["min_margin"])[:8]:
    print(f"{name:32s} runs={st['runs']:4d} min margin={st['min_margin']:.3g}")
