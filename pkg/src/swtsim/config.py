"""Line-based run configuration files.

Format: `key = value` lines grouped under `[problem]`, `[grid]`,
`[smoothing]`, `[run]` headers.  Sections are organizational; the key set
is closed and every key may appear once.  `#` starts a comment.  Numeric
values accept plain floats and fractions like `1/16`.

`ic_type` selects either a recipe kind (`wkb` with `A`/`S` expressions,
`gaussian_sum` with `terms`) or one of the built-in problems by id, in
which case the recipe keys must be absent and `epsilon` (plus optionally
`t_max`) parameterizes the builtin.  `terms` is a semicolon-separated
list of complex triples `alpha,beta,gamma` (literals like `1+3j`); each
triple describes exp((alpha-conjugate structure)/epsilon) data via the
standard alpha/beta/gamma encoding of signals.GaussianTerm.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigError
from .expressions import parse_expression
from .potentials import potential_from_text
from .signals import (GaussianTerm, ProblemSpec, builtin_ids, builtin_problem)

__all__ = ["RunConfig", "parse_config", "load_config", "terms_from_triples"]

_SECTIONS = ("problem", "grid", "smoothing", "run")
_KEYS = ("ic_type", "A", "S", "terms", "V", "epsilon", "t_max",
         "x_min", "x_max", "k_max", "n_x", "sigma_x", "sigma_k")
_RECIPE_KEYS = ("A", "S", "terms", "V", "x_min", "x_max")


@dataclass(frozen=True)
class RunConfig:
    """Parsed configuration: the problem plus grid/smoothing choices.

    n_x and k_max stay None when the file leaves them to policy defaults.
    raw_terms keeps the alpha/beta/gamma triples of a gaussian_sum file so
    an epsilon sweep can rebuild the family at other epsilons.
    """

    spec: ProblemSpec
    n_x: int | None
    k_max: float | None
    sigma_x: float
    sigma_k: float
    raw_terms: tuple[tuple[complex, complex, complex], ...] | None = None


def _number(text: str, key: str, line_no: int) -> float:
    text = text.strip()
    try:
        if "/" in text:
            num, den = text.split("/", 1)
            return float(num) / float(den)
        return float(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad numeric value for {key}: {text!r} ({exc})", line_no)


def _term_triples(text: str, line_no: int) -> tuple[tuple[complex, complex, complex], ...]:
    out = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split(",")
        if len(parts) != 3:
            raise ConfigError(
                f"each term needs exactly alpha,beta,gamma; got {chunk!r}", line_no)
        try:
            alpha, beta, gamma = (complex(p.strip().replace(" ", "")) for p in parts)
        except ValueError as exc:
            raise ConfigError(f"bad complex literal in term {chunk!r}: {exc}", line_no)
        out.append((alpha, beta, gamma))
    if not out:
        raise ConfigError("terms is empty", line_no)
    return tuple(out)


def terms_from_triples(triples, epsilon: float) -> tuple[GaussianTerm, ...]:
    """Interpret alpha/beta/gamma triples at a given epsilon."""
    return tuple(
        GaussianTerm.from_alpha_beta_gamma(alpha, beta, gamma, epsilon)
        for alpha, beta, gamma in triples
    )


def parse_config(text: str) -> RunConfig:
    entries: dict[str, tuple[str, int]] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConfigError(f"malformed section header {line!r}", line_no)
            section = line[1:-1].strip()
            if section not in _SECTIONS:
                raise ConfigError(f"unknown section [{section}]", line_no)
            continue
        if "=" not in line:
            raise ConfigError(f"expected key = value, got {line!r}", line_no)
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _KEYS:
            raise ConfigError(f"unknown key {key!r}", line_no)
        if key in entries:
            raise ConfigError(f"duplicate key {key!r} (first at line {entries[key][1]})",
                              line_no)
        entries[key] = (value, line_no)

    def take(key, default=None):
        return entries.pop(key, (default, 0))

    ic_type, ic_line = take("ic_type")
    if ic_type is None:
        raise ConfigError("missing ic_type", 0)
    eps_text, eps_line = take("epsilon")
    if eps_text is None:
        raise ConfigError("missing epsilon", ic_line)
    epsilon = _number(eps_text, "epsilon", eps_line)

    t_text, t_line = take("t_max")
    t_max = _number(t_text, "t_max", t_line) if t_text is not None else None

    raw_terms = None
    if ic_type in builtin_ids():
        for key in _RECIPE_KEYS:
            if key in entries:
                raise ConfigError(
                    f"{key!r} cannot be combined with the builtin {ic_type!r}",
                    entries[key][1])
        spec = builtin_problem(ic_type, epsilon, t_max=t_max)
    elif ic_type in ("wkb", "gaussian_sum"):
        x_min_t, x_min_l = take("x_min")
        x_max_t, x_max_l = take("x_max")
        x_min = _number(x_min_t, "x_min", x_min_l) if x_min_t is not None else -6.0
        x_max = _number(x_max_t, "x_max", x_max_l) if x_max_t is not None else 6.0
        v_text, v_line = take("V", "0")
        try:
            potential = potential_from_text(v_text)
        except Exception as exc:
            raise ConfigError(f"bad potential: {exc}", v_line)
        kwargs = dict(ic_type=ic_type, potential=potential, epsilon=epsilon,
                      t_max=t_max if t_max is not None else 0.0,
                      x_min=x_min, x_max=x_max)
        if ic_type == "wkb":
            a_text, a_line = take("A")
            s_text, s_line = take("S")
            if a_text is None or s_text is None:
                raise ConfigError("wkb needs both A and S", a_line or s_line or ic_line)
            try:
                kwargs["amplitude"] = parse_expression(a_text)
            except Exception as exc:
                raise ConfigError(f"bad amplitude A: {exc}", a_line)
            try:
                kwargs["phase"] = parse_expression(s_text)
            except Exception as exc:
                raise ConfigError(f"bad phase S: {exc}", s_line)
            if "terms" in entries:
                raise ConfigError("terms does not apply to wkb", entries["terms"][1])
        else:
            terms_text, terms_line = take("terms")
            if terms_text is None:
                raise ConfigError("gaussian_sum needs terms", ic_line)
            raw_terms = _term_triples(terms_text, terms_line)
            kwargs["terms"] = terms_from_triples(raw_terms, epsilon)
            for key in ("A", "S"):
                if key in entries:
                    raise ConfigError(f"{key!r} does not apply to gaussian_sum",
                                      entries[key][1])
        try:
            spec = ProblemSpec(**kwargs)
        except Exception as exc:
            raise ConfigError(f"invalid problem: {exc}", ic_line)
    else:
        raise ConfigError(
            f"ic_type must be wkb, gaussian_sum, or one of {', '.join(builtin_ids())}; "
            f"got {ic_type!r}", ic_line)

    n_x_t, n_x_l = take("n_x")
    n_x = None
    if n_x_t is not None:
        value = _number(n_x_t, "n_x", n_x_l)
        if value != int(value) or value <= 0:
            raise ConfigError(f"n_x must be a positive integer, got {n_x_t!r}", n_x_l)
        n_x = int(value)
    k_max_t, k_max_l = take("k_max")
    k_max = _number(k_max_t, "k_max", k_max_l) if k_max_t is not None else None
    sx_t, sx_l = take("sigma_x")
    sk_t, sk_l = take("sigma_k")
    sigma_x = _number(sx_t, "sigma_x", sx_l) if sx_t is not None else 1.0
    sigma_k = _number(sk_t, "sigma_k", sk_l) if sk_t is not None else 1.0

    for key, (_, line_no) in entries.items():
        raise ConfigError(f"{key!r} is not valid for ic_type {ic_type!r}", line_no)

    return RunConfig(spec=spec, n_x=n_x, k_max=k_max,
                     sigma_x=sigma_x, sigma_k=sigma_k, raw_terms=raw_terms)


def load_config(path) -> RunConfig:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}", 0)
    return parse_config(text)
