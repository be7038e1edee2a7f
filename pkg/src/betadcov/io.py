"""CSV ingestion helpers for the command line front end."""

import csv

import numpy as np


def load_csv(path):
    """Read a numeric CSV with a mandatory header row.

    Returns (header, data) where data is a float matrix with one row
    per observation. Malformed cells are reported with their row and
    column position.
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError("%s: empty file, header row required" % path)
        header = [h.strip() for h in header]
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise ValueError(
                    "%s: line %d has %d fields, header has %d"
                    % (path, lineno, len(row), len(header)))
            try:
                rows.append([float(c) for c in row])
            except ValueError:
                bad = next(i for i, c in enumerate(row)
                           if not _is_float(c))
                raise ValueError(
                    "%s: line %d, column %r: %r is not a number"
                    % (path, lineno, header[bad], row[bad]))
    if not rows:
        raise ValueError("%s: no data rows" % path)
    return header, np.asarray(rows, dtype=float)


def _is_float(text):
    try:
        float(text)
        return True
    except ValueError:
        return False


def parse_columns(spec, header, what):
    """Resolve a column selection to index list.

    Accepts a comma-separated name list ("x1,x2") or a half-open index
    range ("0:2").
    """
    spec = spec.strip()
    if ":" in spec:
        lo, hi = spec.split(":", 1)
        try:
            lo = int(lo) if lo else 0
            hi = int(hi) if hi else len(header)
        except ValueError:
            raise ValueError("%s columns: bad index range %r" % (what, spec))
        if not 0 <= lo < hi <= len(header):
            raise ValueError(
                "%s columns: range %r outside 0:%d" % (what, spec, len(header)))
        return list(range(lo, hi))
    idx = []
    for name in spec.split(","):
        name = name.strip()
        if name not in header:
            raise ValueError(
                "%s columns: %r not in header %s" % (what, name, header))
        idx.append(header.index(name))
    if not idx:
        raise ValueError("%s columns: empty selection" % what)
    return idx
