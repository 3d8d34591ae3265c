"""Text literals for kite elements and shapes.

Elements:  U[-2,-3]   L[5]   U[(0,-1),(-2,0)]   U{0:-1,3:-2}   L{-1:2}
Shapes:    kite{I=3,J=2,lam=[0,1],rho=[1,2]}   kite{I=2,J=1,lam=[0],rho=[1],d=2}
           kite{ZZ01}   kite{OO01,d=2}
"""

from __future__ import annotations

import re

from .kite import Kind, KiteElement, KiteShape, Side
from .lgroup import GroupVector


class LiteralError(ValueError):
    pass


_INT = r"[+-]?\d+"
_VEC = rf"\(\s*(?:{_INT}\s*(?:,\s*{_INT}\s*)*)?\)"
_VALUE = rf"(?:{_INT}|{_VEC})"
_DENSE = re.compile(rf"^\s*([UL])\s*\[\s*((?:{_VALUE}\s*(?:,\s*{_VALUE}\s*)*)?)\]\s*$")
_SPARSE = re.compile(
    rf"^\s*([UL])\s*\{{\s*((?:{_INT}\s*:\s*{_VALUE}\s*(?:,\s*{_INT}\s*:\s*{_VALUE}\s*)*)?)\}}\s*$")
_ITEM = re.compile(rf"({_INT}|{_VEC})")
_PAIR = re.compile(rf"({_INT})\s*:\s*({_INT}|{_VEC})")


def _parse_value(tok: str) -> GroupVector:
    tok = tok.strip()
    if tok.startswith("("):
        inner = tok[1:-1].strip()
        return GroupVector(tuple(int(p) for p in inner.split(",")) if inner else ())
    return GroupVector((int(tok),))


def parse_element(text: str) -> KiteElement:
    m = _DENSE.match(text)
    try:
        if m:
            side = Side(m.group(1))
            values = [_parse_value(t) for t in _ITEM.findall(m.group(2))]
            return KiteElement.dense(side, values)
        m = _SPARSE.match(text)
        if m:
            side = Side(m.group(1))
            pairs = _PAIR.findall(m.group(2))
            mapping = {}
            for k, v in pairs:
                if int(k) in mapping:
                    raise LiteralError(f"duplicate index {k} in {text!r}")
                mapping[int(k)] = _parse_value(v)
            return KiteElement.sparse_from(side, mapping)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, LiteralError):
            raise
        raise LiteralError(f"invalid element literal {text!r}: {exc}") from exc
    raise LiteralError(f"invalid element literal {text!r}")


def _format_value(v: GroupVector) -> str:
    if v.dim == 1:
        return str(v.coords[0])
    return "(" + ",".join(str(c) for c in v.coords) + ")"


def format_element(x: KiteElement) -> str:
    if x.sparse:
        body = ",".join(f"{k}:{_format_value(v)}" for k, v in x.entries)
        return f"{x.side.value}{{{body}}}"
    return f"{x.side.value}[{','.join(_format_value(v) for v in x.entries)}]"


_SHAPE = re.compile(r"^\s*kite\s*\{(.*)\}\s*$", re.S)
_INT_LIST = re.compile(r"^\[\s*((?:\d+\s*(?:,\s*\d+\s*)*)?)\]$")


def _split_top(body: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in body:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    if "".join(cur).strip():
        parts.append("".join(cur).strip())
    return parts


def parse_shape(text: str) -> KiteShape:
    m = _SHAPE.match(text)
    if not m:
        raise LiteralError(f"invalid shape literal {text!r}")
    parts = _split_top(m.group(1))
    if not parts:
        raise LiteralError(f"empty shape literal {text!r}")
    fields: dict[str, str] = {}
    kind = Kind.FINITE
    for p in parts:
        if "=" not in p:
            try:
                kind = Kind(p)
            except ValueError:
                raise LiteralError(f"unknown shape kind {p!r}") from None
            if kind is Kind.FINITE:
                raise LiteralError(f"unknown shape kind {p!r}")
            continue
        key, _, val = p.partition("=")
        key = key.strip()
        if key in fields:
            raise LiteralError(f"duplicate field {key!r}")
        fields[key] = val.strip()
    try:
        dim = int(fields.pop("d", "1"))
        if kind is not Kind.FINITE:
            if fields:
                raise LiteralError(f"{kind.value} takes no fields besides d, got {sorted(fields)}")
            return KiteShape.infinite(kind, dim)
        missing = {"I", "J", "lam", "rho"} - set(fields)
        if missing:
            raise LiteralError(f"shape literal is missing {sorted(missing)}")
        extra = set(fields) - {"I", "J", "lam", "rho"}
        if extra:
            raise LiteralError(f"unknown shape fields {sorted(extra)}")
        maps = []
        for key in ("lam", "rho"):
            lm = _INT_LIST.match(fields[key])
            if not lm:
                raise LiteralError(f"{key} must be a list of indices, got {fields[key]!r}")
            maps.append([int(v) for v in lm.group(1).split(",")] if lm.group(1).strip() else [])
        return KiteShape.finite(int(fields["I"]), int(fields["J"]), maps[0], maps[1], dim)
    except LiteralError:
        raise
    except ValueError as exc:
        raise LiteralError(f"invalid shape literal {text!r}: {exc}") from exc


def format_shape(shape: KiteShape) -> str:
    dim = "" if shape.group_dim == 1 else f",d={shape.group_dim}"
    if not shape.is_finite:
        return f"kite{{{shape.kind.value}{dim}}}"
    lam = ",".join(map(str, shape.lam_map))
    rho = ",".join(map(str, shape.rho_map))
    return f"kite{{I={shape.i_size},J={shape.j_size},lam=[{lam}],rho=[{rho}]{dim}}}"
