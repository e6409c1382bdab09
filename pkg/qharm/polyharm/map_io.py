import json
from fractions import Fraction
from pathlib import Path
from typing import Optional

from qharm.enums.shared import Branch
from qharm.exceptions import InvalidParameterError, MapSchemaError, NotHarmonicError
from qharm.polyharm.harmonic_map import HarmonicMap, extremal_map, identity_map, zsquared_map
from qharm.polyharm.polynomial import Polynomial, format_monomial
from qharm.utils.file_parser import FileParser


def map_to_dict(u: HarmonicMap) -> dict:
    """{"n": int, "components": [[{"exps": [...], "num": int, "den": int}, ...], ...]}"""
    return {"n": u.dimension, "components": [c.to_terms_list() for c in u.components]}


def map_from_dict(document: dict) -> HarmonicMap:
    """
    Build a map from the JSON schema, validating before any computation.

    Raises:
        MapSchemaError: Naming the offending component (1-based) and, for
            harmonicity failures, the nonzero Laplacian coefficient.
    """
    if not isinstance(document, dict) or "n" not in document or "components" not in document:
        raise MapSchemaError("Map document needs the keys 'n' and 'components'.")
    n = document["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise MapSchemaError(f"'n' must be a positive integer, got {n!r}.")
    components = document["components"]
    if not isinstance(components, list) or len(components) != n:
        raise MapSchemaError(f"'components' must be a list of {n} term lists.")

    polynomials = []
    for j, terms in enumerate(components, start=1):
        if not isinstance(terms, list):
            raise MapSchemaError(f"Component {j}: expected a list of terms.")
        collected = {}
        for t, term in enumerate(terms, start=1):
            where = f"Component {j} term {t}"
            if not isinstance(term, dict) or not {"exps", "num", "den"} <= set(term):
                raise MapSchemaError(f"{where}: expected keys 'exps', 'num', 'den'.")
            exps, num, den = term["exps"], term["num"], term["den"]
            if not isinstance(exps, list) or len(exps) != n:
                length = len(exps) if isinstance(exps, list) else "?"
                raise MapSchemaError(f"{where}: exponent list has length {length}, expected {n}.")
            if any(not isinstance(e, int) or isinstance(e, bool) or e < 0 for e in exps):
                raise MapSchemaError(f"{where}: exponents must be non-negative integers.")
            if not isinstance(num, int) or not isinstance(den, int) or isinstance(den, bool):
                raise MapSchemaError(f"{where}: 'num' and 'den' must be integers.")
            if den <= 0:
                raise MapSchemaError(f"{where}: 'den' must be > 0, got {den}.")
            key = tuple(exps)
            collected[key] = collected.get(key, Fraction(0)) + Fraction(num, den)
        polynomial = Polynomial(n, collected)
        residual = polynomial.laplacian()
        if not residual.is_zero():
            exponents, coefficient = next(iter(residual.terms.items()))
            raise MapSchemaError(
                f"Component {j} is not harmonic: Laplacian coefficient {coefficient} "
                f"at {format_monomial(exponents)}."
            )
        polynomials.append(polynomial)

    try:
        return HarmonicMap(polynomials)
    except (NotHarmonicError, InvalidParameterError) as e:
        raise MapSchemaError(str(e))


def load_map(path: Path) -> HarmonicMap:
    u = map_from_dict(FileParser.parse_json_file(path))
    u.name = Path(path).name
    return u


def dump_map(u: HarmonicMap, path: Path):
    with open(path, "w", encoding="utf-8", newline="\n") as map_file:
        json.dump(map_to_dict(u), map_file, indent=2)
        map_file.write("\n")


def resolve_builtin(spec: str, dimension_hint: Optional[int] = None) -> Optional[HarmonicMap]:
    """
    Builtin maps by name: 'identity[:n]', 'stretch:n,K', 'compress:n,K', 'zsquared'.

    Returns None when spec is not a builtin name (it is then a file path).

    Raises:
        InvalidParameterError: A builtin name with bad parameters.
    """
    name, _, params = spec.strip().partition(":")
    name = name.lower()
    if name == "zsquared":
        return zsquared_map()
    if name == "identity":
        if params:
            return identity_map(_parse_int(params, spec))
        if dimension_hint is None:
            raise InvalidParameterError("'identity' needs a dimension, use identity:n.")
        return identity_map(dimension_hint)
    if name in {"stretch", "compress"}:
        values = params.split(",")
        if len(values) != 2:
            raise InvalidParameterError(f"{spec!r}: expected {name}:n,K.")
        n = _parse_int(values[0], spec)
        try:
            K = float(values[1])
        except ValueError:
            raise InvalidParameterError(f"{spec!r}: K is not a number.")
        return extremal_map(n, K, Branch.STRETCH if name == "stretch" else Branch.COMPRESS)
    return None


def _parse_int(text: str, spec: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise InvalidParameterError(f"{spec!r}: {text!r} is not an integer.")
