"""Off-default parameter regimes that once fooled the numeric probes."""
import numpy as np

from pdem_si import catalog, verification as verif
from pdem_si.si_engine import solve_chain
from pdem_si.wavefunctions import admissibility_check


def test_coulomb_degenerate_chain_repeat():
    # for l=1, alpha=0.1 the chain's third state lands exactly on E_1: it is
    # normalizable but not a new level, and the counting rule must still agree
    entry = catalog.ENTRIES["coulomb"]
    p = {"e2": 1.0, "l": 1.0, "alpha": 0.1}
    counting = entry.counting(p)
    assert counting.kind == "finite" and counting.count == 2
    chain = solve_chain(entry.chain_problem(p), 2)
    assert abs(chain.energy(2) - chain.energy(1)) < 1e-15
    assert admissibility_check(entry, p, 2).admissible  # genuinely normalizable
    res = verif.counting_vs_admissibility(entry, p)
    assert res["ok"]


def test_eckart_slow_decay_certificate():
    # decay rate ~0.07 is invisible to octave panel ratios below the coth
    # resolution ceiling; the endpoint log-slope certificate must carry it
    entry = catalog.ENTRIES["eckart"]
    p = {"A": 2.0, "B": 5.0, "alpha": 0.8}
    v0 = admissibility_check(entry, p, 0)
    assert v0.square_integrable and v0.admissible
    assert any(s.get("exp_decay_certificate") for s in v0.evidence["square"]["sides"])
    v1 = admissibility_check(entry, p, 1)
    assert not v1.square_integrable
    assert verif.counting_vs_admissibility(entry, p)["ok"]


def test_morse_oracle_skips_unresolvable_shallow_level():
    # A=2.5, B=7, alpha=1 binds a third state with decay rate ~0.02, far beyond
    # the truncation; the oracle must compare only the two levels it resolves
    entry = catalog.ENTRIES["morse"]
    p = {"A": 2.5, "B": 7.0, "alpha": 1.0}
    assert entry.counting(p).count == 3
    res = verif.oracle_vs_chain(entry, p)
    assert res["levels"] == 2
    assert res["ok"] and res["max_rel_err"] < 1e-4


def test_morse_adaptive_left_wall():
    # large alpha pushes f = 1 + alpha e^{-x} into overflow territory fast; the
    # recipe must pull the wall in so matrix entries stay well-conditioned
    entry = catalog.ENTRIES["morse"]
    deep = entry.oracle_recipe(dict(entry.default_params))
    shallow = entry.oracle_recipe({"A": 2.5, "B": 7.0, "alpha": 1.0})
    assert deep.x1 < -8.0
    assert shallow.x1 >= -5.0


def test_coulomb_default_still_compares_two_levels():
    entry = catalog.ENTRIES["coulomb"]
    res = verif.oracle_vs_chain(entry, dict(entry.default_params))
    assert res["levels"] == 2 and res["ok"]
