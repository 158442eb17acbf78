"""
结果输出。

两种格式：
    text        面向人读的 "key: value" 行，分节缩进
    structured  稳定的 "section.key=value" 行，多项式使用规范文本，便于 diff
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field
from fractions import Fraction

from .cyclotomic import CycScalar
from .groups import ReflectionGroupData
from .logder import Derivation, FreenessCertificate
from .polynomial import MPoly


def format_value(value) -> str:
    """把结果对象转成规范文本。"""
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, (MPoly, CycScalar, Derivation)):
        return value.to_text()
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else str(value)
    if isinstance(value, (tuple, list)):
        return "(" + ", ".join(format_value(v) for v in value) + ")"
    if isinstance(value, dict):
        return " ".join(f"{k}:{format_value(v)}" for k, v in value.items())
    return str(value)


@dataclass
class Report:
    """有序的 (节, 键, 值) 记录。"""

    title: str
    entries: list[tuple[str, str, str]] = field(default_factory=list)
    _section: str = ""

    def section(self, name: str) -> Report:
        self._section = name
        return self

    def add(self, key: str, value) -> Report:
        self.entries.append((self._section, key, format_value(value)))
        return self

    def extend(self, pairs: Iterable[tuple[str, object]]) -> Report:
        for k, v in pairs:
            self.add(k, v)
        return self

    def render(self, fmt: str = "text") -> str:
        if fmt == "structured":
            lines = [f"report={self.title}"]
            for sec, key, value in self.entries:
                name = f"{sec}.{key}" if sec else key
                lines.append(f"{name}={value}")
            return "\n".join(lines) + "\n"
        lines = [self.title, "=" * len(self.title)]
        current = None
        for sec, key, value in self.entries:
            if sec != current:
                current = sec
                if sec:
                    lines.append(f"[{sec}]")
            indent = "  " if sec else ""
            lines.append(f"{indent}{key}: {value}")
        return "\n".join(lines) + "\n"


def group_report(group: ReflectionGroupData) -> Report:
    rep = Report(f"group {group.label}")
    rep.add("order", group.order)
    rep.add("rank", group.rank)
    rep.add("conductor", group.conductor)
    rep.add("hyperplanes", len(group.hyperplanes))
    rep.add("orbit_sizes", tuple(len(o) for o in group.orbits))
    rep.section("hyperplanes")
    for idx, h in enumerate(group.hyperplanes):
        rep.add(f"H{idx}", f"{h.alpha.to_text()} n_H={h.n_H} orbit={h.orbit_id}")
    return rep


def certificate_entries(rep: Report, cert: FreenessCertificate, prefix: str = "") -> Report:
    """证书序列化；排列以 sha256 摘要标识。"""
    rep.section(prefix or "certificate")
    rep.add("arrangement", cert.arrangement.name)
    rep.add("arrangement_sha256", cert.arrangement.digest())
    rep.add("hyperplanes", len(cert.arrangement.forms))
    rep.add("total_multiplicity", cert.arrangement.total())
    rep.add("exponents", cert.exponents)
    rep.add("degree_sum_ok", cert.degree_sum_ok)
    rep.add("determinant_degree", cert.determinant.degree() if cert.determinant else None)
    rep.add("scalar", cert.scalar)
    if cert.residual is not None and not cert.passed:
        rep.add("residual", cert.residual)
    if cert.rank is not None:
        rep.add("rank", cert.rank)
    for k, L in enumerate(cert.basis, 1):
        rep.add(f"theta{k}", L)
    for note in cert.notes:
        rep.add("note", note)
    rep.add("verdict", cert.verdict)
    return rep


def dims_entries(rep: Report, name: str, dims: dict[int, int]) -> Report:
    rep.section(name)
    for d, n in dims.items():
        rep.add(f"deg{d}", n)
    return rep
