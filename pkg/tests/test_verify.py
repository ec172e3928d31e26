import json

import pytest

from grushin.grids import GrushinConfig
from grushin.verify import GROUPS, check_eigenfunction, check_heat_equation, registry, run_verification


def test_registry_names_unique():
    names = [n for n, _, _ in registry(GrushinConfig())]
    assert len(names) == len(set(names))
    assert {g for _, g, _ in registry(GrushinConfig())} == set(GROUPS)


def test_report_deterministic():
    a = run_verification(only=["special"], seed=3)
    b = run_verification(only=["special"], seed=3)
    assert a.to_json() == b.to_json()
    assert a.passed


def test_threads_do_not_change_order():
    a = run_verification(only=["special"], threads=1)
    b = run_verification(only=["special"], threads=3)
    assert [r.name for r in a.results] == [r.name for r in b.results]
    assert a.to_json() == b.to_json()


def test_select_single_check():
    rep = run_verification(only=["mehler_closed_form"])
    assert [r.name for r in rep.results] == ["mehler_closed_form"]


def test_tighten_produces_failures():
    rep = run_verification(only=["special"], tolerance_scale=1e-6)
    assert not rep.passed
    assert "FAIL" in rep.table()


def test_unknown_selection():
    with pytest.raises(ValueError):
        run_verification(only=["nope"])


def test_report_is_json_with_generator():
    data = json.loads(run_verification(only=["hyperbolic_identity"]).to_json())
    assert "default_rng" in data["generator"] and data["seed"] == 0


def test_negative_controls_fail():
    assert not check_eigenfunction(GrushinConfig(), scale=1.01).passed
    assert not check_heat_equation(prefactor_shift=0.01).passed
