"""Witness files, CSV tables and atomic output.

Witness file (line-oriented, ``#`` starts a comment)::

    format = 1
    name = eq26
    a0 = 1.0240506329113924
    term = 1 1 -0.40395569620253163
    term = 3 8 -0.28860759493670886 scale=sqrt3

Numbers are written with 17 significant digits, which round-trips IEEE
doubles exactly.
"""

import csv
import io
import json
import os
import tempfile
from pathlib import Path

from .exceptions import WitnessFileError
from .operators import OperatorLabel, WitnessCoeffs
from .su3 import SQRT3

FORMAT_VERSION = 1
KNOWN_KEYS = ("format", "name", "tag", "a0", "term")
OUTPUT_ENV = "QUTRIT_WITNESS_OUT"


def fmt(x):
    return format(float(x), ".17g")


def _scale_token(lab):
    if lab.scale == 1.0:
        return ""
    return " scale=sqrt3" if lab.is_sqrt3 else f" scale={fmt(lab.scale)}"


def dumps_witness(w, tag=None):
    lines = [f"format = {FORMAT_VERSION}"]
    if w.name:
        lines.append(f"name = {w.name}")
    if tag:
        lines.append(f"tag = {tag}")
    lines.append(f"a0 = {fmt(w.a0)}")
    for lab in w.labels:
        lines.append(f"term = {lab.i} {lab.j} {fmt(w.terms[lab])}{_scale_token(lab)}")
    return "\n".join(lines) + "\n"


def _parse_float(text, line):
    try:
        return float(text)
    except ValueError:
        raise WitnessFileError(f"not a number: {text!r}", line) from None


def _parse_term(value, line):
    parts = value.split()
    scale = 1.0
    if len(parts) == 4:
        key, _, sval = parts[3].partition("=")
        if key != "scale" or not sval:
            raise WitnessFileError(f"expected scale=..., got {parts[3]!r}", line)
        scale = SQRT3 if sval == "sqrt3" else _parse_float(sval, line)
        parts = parts[:3]
    if len(parts) != 3:
        raise WitnessFileError("term needs 'i j coefficient [scale=...]'", line)
    try:
        i, j = int(parts[0]), int(parts[1])
        lab = OperatorLabel(i, j, scale)
    except ValueError as exc:
        raise WitnessFileError(str(exc), line) from None
    return lab, _parse_float(parts[2], line)


def loads_witness(text):
    """Parse a witness file; returns ``(WitnessCoeffs, tag)``."""
    fields = {}
    terms = {}
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep:
            raise WitnessFileError(f"expected 'key = value', got {raw.strip()!r}", n)
        if key not in KNOWN_KEYS:
            raise WitnessFileError(f"unknown key {key!r}", n)
        if key == "term":
            lab, coef = _parse_term(value, n)
            if any((lab.i, lab.j) == (o.i, o.j) for o in terms):
                raise WitnessFileError(f"duplicate term ({lab.i},{lab.j})", n)
            if (lab.i, lab.j) == (0, 0):
                raise WitnessFileError("the identity coefficient goes in a0", n)
            terms[lab] = coef
            continue
        if key in fields:
            raise WitnessFileError(f"duplicate key {key!r}", n)
        fields[key] = (value, n)
    if "format" not in fields:
        raise WitnessFileError("missing 'format' line", 1)
    version, n = fields["format"]
    if version != str(FORMAT_VERSION):
        raise WitnessFileError(f"unsupported format version {version!r}", n)
    if "a0" not in fields:
        raise WitnessFileError("missing 'a0' line", len(text.splitlines()) or 1)
    a0 = _parse_float(*fields["a0"])
    name = fields.get("name", (None,))[0]
    tag = fields.get("tag", (None,))[0]
    return WitnessCoeffs(a0, terms, name=name), tag


def witness_to_json(w, tag=None):
    return {
        "format": FORMAT_VERSION,
        "name": w.name,
        "tag": tag,
        "a0": w.a0,
        "terms": [
            {"i": lab.i, "j": lab.j, "scale": "sqrt3" if lab.is_sqrt3 else lab.scale, "coefficient": w.terms[lab]}
            for lab in w.labels
        ],
    }


def witness_from_json(data):
    unknown = set(data) - {"format", "name", "tag", "a0", "terms"}
    if unknown:
        raise WitnessFileError(f"unknown fields {sorted(unknown)}")
    if data.get("format") != FORMAT_VERSION:
        raise WitnessFileError(f"unsupported format version {data.get('format')!r}")
    terms = {}
    for t in data.get("terms", []):
        scale = SQRT3 if t.get("scale", 1.0) == "sqrt3" else float(t.get("scale", 1.0))
        terms[OperatorLabel(t["i"], t["j"], scale)] = float(t["coefficient"])
    return WitnessCoeffs(float(data["a0"]), terms, name=data.get("name")), data.get("tag")


def read_witness(path):
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        try:
            return witness_from_json(json.loads(text))
        except json.JSONDecodeError as exc:
            raise WitnessFileError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    return loads_witness(text)


def atomic_write(path, text):
    """Write ``text`` to ``path`` via a temporary file and ``os.replace``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _cplx(z):
    return f"{fmt(z.real)}{'+' if z.imag >= 0 else '-'}{fmt(abs(z.imag))}j"


def vertices_csv(points):
    """Catalog as CSV: coordinates, their exact fractions and the generating vectors."""
    if not points:
        return ""
    fam = points[0].family
    cols = [f"P{l.i}{l.j}" if l.i != l.j else f"P{l.i}" for l in fam.labels]
    header = ["index"] + cols + ["exact", "alpha", "beta"]
    rows = []
    for k, p in enumerate(points):
        exact = " ".join(str(x) for x in p.exact) if p.exact is not None else ""
        a = " ".join(_cplx(z) for z in p.state.alpha) if p.state is not None else ""
        b = " ".join(_cplx(z) for z in p.state.beta) if p.state is not None else ""
        rows.append([k] + [fmt(x) for x in p.coords] + [exact, a, b])
    return csv_text(header, rows)


def default_output_dir():
    return Path(os.environ.get(OUTPUT_ENV, "."))


def write_orbit_bundle(directory, orbit, tag=None):
    """One witness file per member plus ``index.txt``; returns the file paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    width = max(3, len(str(orbit.size - 1)))
    paths = []
    base = orbit.representative.name or "member"
    for k, w in enumerate(orbit.members):
        named = w.renamed(base if k == 0 else f"{base}~{k}")
        p = directory / f"member_{k:0{width}d}.wit"
        atomic_write(p, dumps_witness(named, tag=tag))
        paths.append(p)
    gens = ", ".join(g.name for g in orbit.generators)
    atomic_write(directory / "index.txt",
                 f"representative = {base}\ngenerators = {gens}\nsize = {orbit.size}\n")
    return paths
