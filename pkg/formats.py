"""Plain-text I/O: curve JSON / CSV, packing and configuration JSON, and result-table renderers."""
import csv
import io
import json
import logging
import math
from pathlib import Path

import numpy as np

import utils
from errors import CurveFormatError, DegenerateInputError
from geom_core import make_circle
from models import Ambient, DiscreteCurve, DiscreteLink, PackingSpec, S2Config

OUTPUT_FORMATS = ("json", "csv", "table")


def plain(value):
    """Convert numpy scalars / arrays and non-finite floats to JSON-safe values"""
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return plain(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    return value


def _load_json(path):
    try:
        with open(path, encoding='utf-8') as handle:
            return json.load(handle)
    except json.JSONDecodeError as e:
        raise CurveFormatError(f"invalid JSON: {e.msg}", line=e.lineno) from e
    except OSError as e:
        raise CurveFormatError(f"cannot read {path}: {e.strerror}") from e


def _numbers(values, field, length=None):
    try:
        array = np.asarray(values, dtype=float)
    except (TypeError, ValueError) as e:
        raise CurveFormatError("expected numbers", field=field) from e
    if length is not None and array.shape != (length,):
        raise CurveFormatError(f"expected {length} numbers", field=field)
    return array


# Curves

def link_to_dict(link):
    return {
        'ambient': link.ambient.value,
        'components': [c.samples.tolist() for c in link.components],
    }


def link_from_dict(data):
    if not isinstance(data, dict):
        raise CurveFormatError("expected an object with 'ambient' and 'components'")
    try:
        ambient = Ambient(data.get('ambient', Ambient.EUCLIDEAN.value))
    except ValueError as e:
        raise CurveFormatError(f"unknown ambient {data.get('ambient')!r}, expected r3 or s3", field='ambient') from e
    components = data.get('components')
    if not isinstance(components, list) or not components:
        raise CurveFormatError("expected a nonempty list of components", field='components')

    curves = []
    for index, samples in enumerate(components):
        field = f"components[{index}]"
        if not isinstance(samples, list):
            raise CurveFormatError("expected a list of points", field=field)
        rows = [_numbers(p, f"{field}[{k}]", ambient.dimension) for k, p in enumerate(samples)]
        try:
            curves.append(DiscreteCurve(np.array(rows).reshape(-1, ambient.dimension), ambient))
        except DegenerateInputError as e:
            raise CurveFormatError(str(e), field=field) from e
    try:
        return DiscreteLink(tuple(curves))
    except DegenerateInputError as e:
        raise CurveFormatError(str(e), field='components') from e


def read_curve_json(path):
    return link_from_dict(_load_json(path))


def read_curve_csv(path):
    """Rows of component,x,y,z[,w]; four coordinates mean a curve on S³"""
    try:
        with open(path, newline='', encoding='utf-8') as handle:
            rows = list(csv.reader(handle))
    except OSError as e:
        raise CurveFormatError(f"cannot read {path}: {e.strerror}") from e

    rows = [(number, row) for number, row in enumerate(rows, start=1) if row and not row[0].startswith('#')]
    if rows and rows[0][1][0].strip().lower() == 'component':
        rows = rows[1:]
    if not rows:
        raise CurveFormatError("no samples found")

    width = len(rows[0][1])
    if width not in (4, 5):
        raise CurveFormatError(f"expected 4 or 5 columns, got {width}", line=rows[0][0])
    ambient = Ambient.EUCLIDEAN if width == 4 else Ambient.SPHERICAL

    grouped = {}
    for number, row in rows:
        if len(row) != width:
            raise CurveFormatError(f"expected {width} columns, got {len(row)}", line=number)
        try:
            component = int(row[0])
            point = [float(v) for v in row[1:]]
        except ValueError as e:
            raise CurveFormatError("not a number", line=number) from e
        grouped.setdefault(component, []).append(point)

    curves = []
    for component in sorted(grouped):
        try:
            curves.append(DiscreteCurve(np.array(grouped[component]), ambient))
        except DegenerateInputError as e:
            raise CurveFormatError(f"component {component}: {e}") from e
    try:
        return DiscreteLink(tuple(curves))
    except DegenerateInputError as e:
        raise CurveFormatError(str(e)) from e


def read_curve(path):
    if Path(path).suffix.lower() == '.csv':
        return read_curve_csv(path)
    return read_curve_json(path)


def curve_csv(link):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    axes = ['x', 'y', 'z', 'w'][:link.ambient.dimension]
    writer.writerow(['component'] + axes)
    for index, curve in enumerate(link.components):
        for point in curve.samples:
            writer.writerow([index] + [repr(float(v)) for v in point])
    return buffer.getvalue()


def curve_json(link, metadata=None):
    document = link_to_dict(link)
    if metadata is not None:
        document = {'metadata': metadata, **document}
    return json.dumps(plain(document), indent=2)


# Packings and configurations

def packing_to_dict(spec):
    return {
        'name': spec.name,
        'basis': spec.basis.tolist(),
        'motif': [{'center': list(c.center), 'normal': list(c.normal.coords), 'radius': c.radius}
                  for c in spec.motif],
        'tube_radius': spec.tube_radius,
    }


def packing_from_dict(data):
    if not isinstance(data, dict) or 'basis' not in data:
        raise CurveFormatError("expected an object with 'basis', 'motif' and 'tube_radius'", field='basis')
    basis = _numbers(data['basis'], 'basis')
    if basis.shape != (3, 3):
        raise CurveFormatError("expected three 3-vectors", field='basis')
    motif = []
    for index, core in enumerate(data.get('motif', [])):
        field = f"motif[{index}]"
        if not isinstance(core, dict):
            raise CurveFormatError("expected {center, normal, radius}", field=field)
        try:
            motif.append(make_circle(
                _numbers(core.get('center'), f"{field}.center", 3),
                _numbers(core.get('normal'), f"{field}.normal", 3),
                float(core.get('radius', 1.0))))
        except (TypeError, ValueError, DegenerateInputError) as e:
            raise CurveFormatError(str(e), field=field) from e
    try:
        return PackingSpec(basis, tuple(motif), float(data.get('tube_radius', 1.0)),
                           name=str(data.get('name', 'custom')))
    except DegenerateInputError as e:
        raise CurveFormatError(str(e), field='basis') from e


def read_packing_json(path):
    return packing_from_dict(_load_json(path))


def packing_json(spec):
    return json.dumps(plain(packing_to_dict(spec)), indent=2)


def read_config_json(path):
    """S² configuration from {"points": [[x, y, z], ...]} or a bare point list; points are normalized"""
    data = _load_json(path)
    points = data.get('points') if isinstance(data, dict) else data
    if not isinstance(points, list) or not points:
        raise CurveFormatError("expected a nonempty point list", field='points')
    rows = [_numbers(p, f"points[{k}]", 3) for k, p in enumerate(points)]
    try:
        return S2Config.normalized(np.array(rows))
    except DegenerateInputError as e:
        raise CurveFormatError(str(e), field='points') from e


def config_json(config, metadata=None):
    document = {'points': config.points.tolist()}
    if metadata is not None:
        document = {'metadata': metadata, **document}
    return json.dumps(plain(document), indent=2)


# Result tables

def render(rows, output_format="table", metadata=None, columns=None):
    """Render a list of row dicts as JSON, CSV (metadata as leading # lines) or an aligned table"""
    if output_format not in OUTPUT_FORMATS:
        raise CurveFormatError(f"unknown output format '{output_format}'")
    rows = [plain(row) for row in rows]
    columns = columns or (list(rows[0].keys()) if rows else [])

    if output_format == "json":
        return json.dumps({'metadata': plain(metadata or {}), 'rows': rows}, indent=2)

    if output_format == "csv":
        buffer = io.StringIO()
        for key, value in plain(metadata or {}).items():
            buffer.write(f"# {key}: {json.dumps(value)}\n")
        writer = csv.DictWriter(buffer, fieldnames=columns, extrasaction='ignore', lineterminator='\n')
        writer.writeheader()
        for row in rows:
            writer.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in row.items()})
        return buffer.getvalue()

    cells = [[utils.format_value(row.get(c)) for c in columns] for row in rows]
    widths = [max([len(c)] + [len(r[i]) for r in cells]) for i, c in enumerate(columns)]
    lines = []
    for key, value in plain(metadata or {}).items():
        if not isinstance(value, dict):
            lines.append(f"{key}: {value}")
    if lines:
        lines.append("")
    lines.append("  ".join(c.ljust(w) for c, w in zip(columns, widths)))
    lines.append("  ".join("-" * w for w in widths))
    for row in cells:
        lines.append("  ".join(v.ljust(w) for v, w in zip(row, widths)))
    logging.debug(f"rendered {len(rows)} rows as {output_format}")
    return "\n".join(lines) + "\n"


def write_text(text, path):
    Path(path).write_text(text, encoding='utf-8')
    logging.info(f"wrote {path}")
