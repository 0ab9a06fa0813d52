"""Run-configuration parsing: the happy paths and every diagnostic."""

import numpy as np
import pytest

from swtsim.config import RunConfig, load_config, parse_config, terms_from_triples
from swtsim.errors import ConfigError
from swtsim.potentials import Linear, Zero
from swtsim.signals import GaussianTerm

WKB_TEXT = """\
# quartic-phase packet on a custom window
[problem]
ic_type = wkb
A = exp(-x^2)
S = -x^4/4 + 2*x   # steep chirp
V = x^2/2
epsilon = 1/16
t_max = 0.5
x_min = -4
x_max = 4

[grid]
n_x = 2048
k_max = 6.5

[smoothing]
sigma_x = 1
sigma_k = 0.25
"""

GS_TEXT = """\
[problem]
ic_type = gaussian_sum
terms = 1+3j, 0.5, 0 ; 2-1j, -0.25+0.5j, 1j
epsilon = 0.125
"""


class TestHappyPaths:
    def test_wkb_round_trip(self):
        cfg = parse_config(WKB_TEXT)
        assert isinstance(cfg, RunConfig)
        spec = cfg.spec
        assert spec.ic_type == "wkb"
        assert spec.epsilon == 1.0 / 16.0
        assert spec.t_max == 0.5
        assert (spec.x_min, spec.x_max) == (-4.0, 4.0)
        assert spec.potential.value(3.0) == pytest.approx(4.5)
        assert str(spec.amplitude) == "exp(-x^2)"
        assert spec.phase(1.0) == pytest.approx(7.0 / 4.0)
        assert cfg.n_x == 2048 and cfg.k_max == 6.5
        assert cfg.sigma_x == 1.0 and cfg.sigma_k == 0.25
        assert cfg.raw_terms is None

    def test_gaussian_sum_keeps_raw_triples(self):
        cfg = parse_config(GS_TEXT)
        assert cfg.raw_terms == ((1 + 3j, 0.5 + 0j, 0j), (2 - 1j, -0.25 + 0.5j, 1j))
        rebuilt = terms_from_triples(cfg.raw_terms, cfg.spec.epsilon)
        assert cfg.spec.terms == rebuilt
        assert all(isinstance(t, GaussianTerm) for t in cfg.spec.terms)
        assert isinstance(cfg.spec.potential, Zero)

    def test_builtin_with_overrides(self):
        cfg = parse_config("ic_type = problem3\nepsilon = 1/64\nt_max = 0.125\n")
        assert cfg.spec.name == "problem3"
        assert cfg.spec.epsilon == 1.0 / 64.0
        assert cfg.spec.t_max == 0.125
        assert isinstance(cfg.spec.potential, Linear)

    def test_defaults(self):
        cfg = parse_config("ic_type = wkb\nA = exp(-x^2)\nS = x\nepsilon = 0.5\n")
        spec = cfg.spec
        assert (spec.x_min, spec.x_max) == (-6.0, 6.0)
        assert isinstance(spec.potential, Zero)
        assert spec.t_max == 0.0
        assert cfg.n_x is None and cfg.k_max is None
        assert cfg.sigma_x == 1.0 and cfg.sigma_k == 1.0

    def test_load_config(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text(GS_TEXT)
        assert load_config(path).spec.epsilon == 0.125

    def test_sections_are_organizational(self):
        # The same keys parse identically with or without headers.
        bare = parse_config("ic_type = problem1\nepsilon = 0.25\nsigma_k = 2\n")
        grouped = parse_config(
            "[problem]\nic_type = problem1\nepsilon = 0.25\n[smoothing]\nsigma_k = 2\n")
        assert bare.spec.name == grouped.spec.name
        assert bare.sigma_k == grouped.sigma_k == 2.0


def _error(text):
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    return info.value


class TestDiagnostics:
    def test_malformed_section(self):
        err = _error("[grid\nic_type = problem1\nepsilon = 1\n")
        assert "malformed section" in str(err) and err.line_no == 1

    def test_unknown_section(self):
        err = _error("[stuff]\n")
        assert "unknown section" in str(err)

    def test_missing_equals(self):
        err = _error("ic_type problem1\n")
        assert "expected key = value" in str(err)

    def test_unknown_key(self):
        err = _error("ic_type = problem1\nepsilon = 1\ncolor = red\n")
        assert "unknown key 'color'" in str(err) and err.line_no == 3

    def test_duplicate_key(self):
        err = _error("ic_type = problem1\nepsilon = 1\nepsilon = 2\n")
        assert "duplicate key" in str(err) and "first at line 2" in str(err)

    def test_missing_ic_type(self):
        assert "missing ic_type" in str(_error("epsilon = 1\n"))

    def test_missing_epsilon(self):
        assert "missing epsilon" in str(_error("ic_type = problem1\n"))

    def test_bad_number(self):
        err = _error("ic_type = problem1\nepsilon = fast\n")
        assert "bad numeric value for epsilon" in str(err) and err.line_no == 2

    def test_fraction_by_zero(self):
        assert "bad numeric value" in str(_error("ic_type = problem1\nepsilon = 1/0\n"))

    def test_unknown_ic_type(self):
        err = _error("ic_type = problem9\nepsilon = 1\n")
        assert "ic_type must be" in str(err)

    def test_builtin_rejects_recipe_keys(self):
        err = _error("ic_type = problem1\nepsilon = 1\nV = x\n")
        assert "cannot be combined with the builtin" in str(err) and err.line_no == 3

    def test_wkb_needs_both_expressions(self):
        err = _error("ic_type = wkb\nA = exp(-x^2)\nepsilon = 1\n")
        assert "wkb needs both A and S" in str(err)

    def test_wkb_rejects_terms(self):
        err = _error("ic_type = wkb\nA = 1\nS = x\nterms = 1,0,0\nepsilon = 1\n")
        assert "terms does not apply to wkb" in str(err)

    def test_bad_amplitude(self):
        err = _error("ic_type = wkb\nA = exp(\nS = x\nepsilon = 1\n")
        assert "bad amplitude A" in str(err) and err.line_no == 2

    def test_bad_potential(self):
        err = _error("ic_type = wkb\nA = 1\nS = x\nV = 2+\nepsilon = 1\n")
        assert "bad potential" in str(err)

    def test_gaussian_sum_needs_terms(self):
        err = _error("ic_type = gaussian_sum\nepsilon = 1\n")
        assert "gaussian_sum needs terms" in str(err)

    def test_gaussian_sum_rejects_wkb_keys(self):
        err = _error("ic_type = gaussian_sum\nterms = 1,0,0\nS = x\nepsilon = 1\n")
        assert "'S' does not apply to gaussian_sum" in str(err)

    def test_term_triple_arity(self):
        err = _error("ic_type = gaussian_sum\nterms = 1,0\nepsilon = 1\n")
        assert "exactly alpha,beta,gamma" in str(err)

    def test_term_bad_literal(self):
        err = _error("ic_type = gaussian_sum\nterms = one,0,0\nepsilon = 1\n")
        assert "bad complex literal" in str(err)

    def test_terms_empty(self):
        err = _error("ic_type = gaussian_sum\nterms = ;\nepsilon = 1\n")
        assert "terms is empty" in str(err)

    def test_n_x_must_be_positive_integer(self):
        for bad in ("2.5", "-4", "0"):
            err = _error(f"ic_type = problem1\nepsilon = 1\nn_x = {bad}\n")
            assert "n_x must be a positive integer" in str(err)

    def test_invalid_problem_wrapped(self):
        err = _error("ic_type = wkb\nA = 1\nS = x\nepsilon = 1\nt_max = -1\n")
        assert "invalid problem" in str(err)

    def test_unreadable_file(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read config"):
            load_config(tmp_path / "missing.cfg")


class TestTermsFromTriples:
    def test_matches_single_term_constructor(self):
        triples = ((1 + 3j, 0.5 - 0.25j, 0.75j),)
        built = terms_from_triples(triples, 0.125)
        direct = GaussianTerm.from_alpha_beta_gamma(1 + 3j, 0.5 - 0.25j, 0.75j, 0.125)
        assert built == (direct,)

    def test_epsilon_changes_terms(self):
        triples = ((1 + 3j, 0.0j, 0.0j),)
        assert terms_from_triples(triples, 0.25) != terms_from_triples(triples, 0.125)
