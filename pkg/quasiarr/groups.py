"""有限复反射群：构造、超平面、轨道与投影算子。"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from enum import Enum
from fractions import Fraction
from itertools import combinations
from math import lcm

import numpy as np

from . import config
from .cyclotomic import CycScalar, CyclotomicField
from .errors import GroupOrderExceededError, UnsupportedGroupError
from .linalg import identity, matrix_key, row_reduce_vectors, scalar_det, scalar_inverse, scalar_matrix
from .polynomial import MPoly, monomials_of_degree

logger = logging.getLogger(__name__)


class Family(Enum):
    """支持的反射群族。"""

    A = "A"
    B = "B"
    C = "C"
    D = "D"
    I2 = "I2"
    I2C = "I2C"
    G = "G"
    CUSTOM = "custom"

    @property
    def crystallographic(self) -> bool:
        return self in (Family.A, Family.B, Family.C, Family.D)


@dataclass(frozen=True)
class Root:
    """正根数据：向量 α、线性型 (α, x)、余根 α^∨ 以及所属超平面。"""

    vector: tuple[CycScalar, ...]
    form: MPoly
    coroot: tuple[CycScalar, ...]
    hyperplane: int


@dataclass(eq=False)
class Hyperplane:
    """
    反射超平面 H。

    字段：
        alpha: 归一化线性型（首个非零系数为 1）
        alpha_check: 余根向量，满足 s_H(v) = v - α(v)·α^∨
        s_H: 生成元 s_H 在元素表中的下标
        n_H: 稳定子群 W_H 的阶
        orbit_id: 所属 W-轨道编号
        det: det s_H，即 exp(2πi/n_H)
    """

    alpha: MPoly
    alpha_check: tuple[CycScalar, ...]
    s_H: int
    n_H: int
    orbit_id: int
    det: CycScalar
    reflections: list[int] = dc_field(default_factory=list)


@dataclass(eq=False)
class ReflectionGroupData:
    """
    枚举完毕的反射群。

    元素按从生成元出发的广度优先顺序排列，下标 0 为单位元。
    """

    family: Family
    params: tuple
    rank: int
    conductor: int
    field: CyclotomicField
    elements: list[np.ndarray]
    generators: list[int]
    inverses: list[int]
    hyperplanes: list[Hyperplane]
    orbits: list[list[int]]
    gram: np.ndarray
    roots: list[Root] = dc_field(default_factory=list)
    bridge: np.ndarray | None = None
    _images: dict = dc_field(default_factory=dict, repr=False)
    _lookup: dict = dc_field(default_factory=dict, repr=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def label(self) -> str:
        if self.family is Family.G:
            r, _, n = self.params
            return f"G({r},1,{n})"
        if self.family in (Family.I2, Family.I2C):
            return f"{self.family.value}({self.params[0]})"
        if self.family is Family.CUSTOM:
            return "custom"
        return f"{self.family.value}{self.rank}"

    def index_of(self, mat: np.ndarray) -> int:
        return self._lookup[matrix_key(mat)]

    def multiply(self, a: int, b: int) -> int:
        return self.index_of(self.elements[a] @ self.elements[b])

    def images(self, g: int) -> list[MPoly]:
        """x_i ↦ (g^{-1}x)_i 的线性像，用于多项式作用 (g·p)(x) = p(g^{-1}x)。"""
        cached = self._images.get(g)
        if cached is None:
            inv = self.elements[self.inverses[g]]
            cached = [MPoly.linear(self.field, list(inv[i, :])) for i in range(self.rank)]
            self._images[g] = cached
        return cached

    @property
    def reflection_count(self) -> int:
        return sum(h.n_H - 1 for h in self.hyperplanes)

    def zero(self) -> MPoly:
        return MPoly(self.field, self.rank)

    def var(self, i: int) -> MPoly:
        return MPoly.var(self.field, self.rank, i)


# -- multiplicities ------------------------------------------------------------


@dataclass(frozen=True)
class MultFn:
    """按轨道给出的 W-不变重数函数。"""

    values: tuple[int, ...]

    def __post_init__(self):
        if any(v < 0 for v in self.values):
            raise ValueError(f"multiplicities must be nonnegative: {self.values}")

    @classmethod
    def constant(cls, group: ReflectionGroupData, value: int) -> MultFn:
        return cls((value,) * len(group.orbits))

    @classmethod
    def parse(cls, text: str, group: ReflectionGroupData) -> MultFn:
        """解析 "1" 或 "2,1" 形式的重数；单个值会广播到所有轨道。"""
        values = tuple(int(v) for v in str(text).replace(" ", "").split(",") if v != "")
        if len(values) == 1:
            values = values * len(group.orbits)
        if len(values) != len(group.orbits):
            raise ValueError(f"{group.label} has {len(group.orbits)} orbits, got {len(values)} values")
        return cls(values)

    def of(self, h: Hyperplane) -> int:
        return self.values[h.orbit_id]

    def shifted(self, delta: int) -> MultFn:
        return MultFn(tuple(v + delta for v in self.values))

    def is_constant(self) -> bool:
        return len(set(self.values)) <= 1

    def __str__(self) -> str:
        return ",".join(str(v) for v in self.values)


@dataclass(frozen=True)
class BCMult:
    """BC_N 的重数三元组 (m1, m2, m3)，分别对应 e_i、2e_i、e_i ± e_j。"""

    m1: int
    m2: int
    m3: int

    @classmethod
    def parse(cls, text: str) -> BCMult:
        values = [int(v) for v in str(text).split(",")]
        if len(values) == 1:
            values = values * 3
        if len(values) != 3 or any(v < 0 for v in values):
            raise ValueError(f"BC multiplicities are a nonnegative triple, got {text!r}")
        return cls(*values)

    def tilde(self) -> MultFn:
        """B_N 上的诱导重数 m̃ = (m1 + m2, m3)，轨道顺序为短根在前。"""
        return MultFn((self.m1 + self.m2, self.m3))

    def __str__(self) -> str:
        return f"{self.m1},{self.m2},{self.m3}"


def c_v(group: ReflectionGroupData, m: MultFn) -> Fraction:
    """c_V(m) = (1/N) Σ_H m_H n_H。"""
    return Fraction(sum(m.of(h) * h.n_H for h in group.hyperplanes), group.rank)


# -- construction --------------------------------------------------------------


def _perm_swap(n: int, i: int, j: int) -> list[list[int]]:
    rows = [[int(a == b) for b in range(n)] for a in range(n)]
    rows[i], rows[j] = rows[j], rows[i]
    return rows


def _diag(n: int, values) -> list[list]:
    return [[values[i] if i == j else 0 for j in range(n)] for i in range(n)]


def _family_setup(family: Family, params: tuple):
    """校验参数并返回 (秩, 导子)。"""
    if family is Family.A:
        (n,) = params
        if n < 1:
            raise UnsupportedGroupError("A_N needs N >= 1")
        return n, 2
    if family in (Family.B, Family.C):
        (n,) = params
        if n < 2:
            raise UnsupportedGroupError(f"{family.value}_N needs N >= 2")
        return n, 2
    if family is Family.D:
        (n,) = params
        if n < 2:
            raise UnsupportedGroupError("D_N needs N >= 2")
        return n, 2
    if family is Family.I2:
        (k,) = params
        if k < 2:
            raise UnsupportedGroupError("I2(k) needs k >= 2")
        return 2, lcm(2 * k, 4)
    if family is Family.I2C:
        (k,) = params
        if k < 2 or k % 2:
            raise UnsupportedGroupError("complex dihedral coordinates need an even k = 2l")
        return 2, lcm(k, 4)
    if family is Family.G:
        r, p, n = params
        if p != 1:
            raise UnsupportedGroupError("only G(r,1,N) is supported")
        if r < 2 or n < 1:
            raise UnsupportedGroupError("G(r,1,N) needs r >= 2 and N >= 1")
        return n, lcm(r, 2)
    raise UnsupportedGroupError(f"no built-in construction for {family.value}")


def _generators(family: Family, params: tuple, field: CyclotomicField) -> list[np.ndarray]:
    n, _ = _family_setup(family, params)
    gens: list[list[list]] = []
    if family is Family.A:
        for k in range(n - 1):
            gens.append(_perm_swap(n, k, k + 1))
        last = [[int(a == b) for b in range(n)] for a in range(n)]
        last[n - 1] = [-1] * n
        gens.append(last)
    elif family in (Family.B, Family.C):
        gens.append(_diag(n, [-1] + [1] * (n - 1)))
        gens.extend(_perm_swap(n, k, k + 1) for k in range(n - 1))
    elif family is Family.D:
        gens.extend(_perm_swap(n, k, k + 1) for k in range(n - 1))
        flip = [[int(a == b) for b in range(n)] for a in range(n)]
        flip[0][0], flip[1][1] = 0, 0
        flip[0][1], flip[1][0] = -1, -1
        gens.append(flip)
    elif family is Family.I2:
        (k,) = params
        zk = field.root_of_unity(k)
        i = field.root_of_unity(4)
        c = (zk + zk.inverse()) / 2
        s = (zk - zk.inverse()) / (2 * i)
        gens.append(_diag(2, [-1, 1]))
        gens.append([[-c, s], [s, c]])
    elif family is Family.I2C:
        (k,) = params
        eps = field.root_of_unity(k)
        for omega in (field(-1), -eps):
            gens.append([[0, omega], [omega.inverse(), 0]])
    elif family is Family.G:
        r, _, n = params
        gens.append(_diag(n, [field.root_of_unity(r)] + [1] * (n - 1)))
        gens.extend(_perm_swap(n, k, k + 1) for k in range(n - 1))
    return [scalar_matrix(field, g) for g in gens]


def _gram(family: Family, n: int, field: CyclotomicField) -> np.ndarray:
    if family is Family.A:
        return scalar_matrix(field, [[int(i == j) + 1 for j in range(n)] for i in range(n)])
    return identity(field, n)


def _roots(group: ReflectionGroupData) -> list[Root]:
    """晶体族的正根；B 用 e_i，C 用 2e_i，A 使用本质坐标。"""
    fam, n, fld = group.family, group.rank, group.field
    out: list[tuple[list, list]] = []

    def vec(pairs):
        v = [0] * n
        for idx, c in pairs:
            if idx < n:
                v[idx] += c
        return v

    if fam is Family.A:
        for i, j in combinations(range(n + 1), 2):
            v = vec([(i, 1), (j, -1)])
            if j == n:
                form = [int(k == i) + 1 for k in range(n)]
            else:
                form = [int(k == i) - int(k == j) for k in range(n)]
            out.append((v, form, v))
    else:
        if fam in (Family.B, Family.C):
            for i in range(n):
                e = vec([(i, 1)])
                if fam is Family.B:
                    out.append((e, e, [2 * c for c in e]))
                else:
                    out.append(([2 * c for c in e], [2 * c for c in e], e))
        for i, j in combinations(range(n), 2):
            for eps in (-1, 1):
                v = vec([(i, 1), (j, eps)])
                out.append((v, v, v))
    roots = []
    for v, form, coroot in out:
        poly = MPoly.linear(fld, form)
        h = _hyperplane_index(group, poly)
        roots.append(Root(tuple(fld(c) for c in v), poly, tuple(fld(Fraction(c)) for c in coroot), h))
    return roots


def normalize_form(p: MPoly) -> MPoly:
    """把线性型缩放为首个非零系数为 1。"""
    lead = None
    for i in range(p.nvars):
        c = p.coeff(tuple(int(i == j) for j in range(p.nvars)))
        if c:
            lead = c
            break
    if lead is None:
        return p
    return p.scale(lead.inverse())


def _form_key(p: MPoly) -> tuple:
    return tuple(sorted((e, c.coeffs) for e, c in p.terms.items()))


def _hyperplane_index(group: ReflectionGroupData, form: MPoly) -> int:
    key = _form_key(normalize_form(form))
    for idx, h in enumerate(group.hyperplanes):
        if _form_key(h.alpha) == key:
            return idx
    raise KeyError(f"{form} is not a reflecting hyperplane of {group.label}")


def _reflection_form(field: CyclotomicField, mat: np.ndarray) -> tuple[list, int] | None:
    """若 mat 为反射（rank(mat - I) = 1），返回归一化的行向量 α 及其首个非零下标。"""
    n = mat.shape[0]
    diff = [[mat[i, j] - (1 if i == j else 0) for j in range(n)] for i in range(n)]
    nonzero = [r for r in diff if any(r)]
    if not nonzero:
        return None
    r0 = nonzero[0]
    i0 = next(j for j, v in enumerate(r0) if v)
    alpha = [v / r0[i0] for v in r0]
    for r in nonzero[1:]:
        f = r[i0]
        if any(a * f != b for a, b in zip(alpha, r)):
            return None
    return alpha, i0


def group_from_generators(
    field: CyclotomicField,
    generators: list[np.ndarray],
    family: Family = Family.CUSTOM,
    params: tuple = (),
    order_cap: int | None = None,
    elements: list[np.ndarray] | None = None,
) -> ReflectionGroupData:
    """
    从生成元做广度优先闭包，并提取超平面与轨道。

    参数：
        field: 系数域 Q(ζ_M)
        generators: 生成元矩阵（numpy object 数组）
        elements: 若提供（例如来自缓存），则跳过闭包
    返回：
        ReflectionGroupData
    """
    cap = order_cap if order_cap is not None else config.settings.order_cap
    n = generators[0].shape[0]
    if elements is None:
        ident = identity(field, n)
        elements = [ident]
        seen = {matrix_key(ident): 0}
        head = 0
        while head < len(elements):
            cur = elements[head]
            head += 1
            for g in generators:
                prod = cur @ g
                key = matrix_key(prod)
                if key not in seen:
                    if len(elements) >= cap:
                        raise GroupOrderExceededError(f"group order exceeds the cap {cap}")
                    seen[key] = len(elements)
                    elements.append(prod)
    lookup = {matrix_key(e): i for i, e in enumerate(elements)}
    gen_idx = [lookup[matrix_key(g)] for g in generators]
    inverses = [lookup[matrix_key(scalar_inverse(field, e))] for e in elements]

    # 超平面：按元素的 BFS 顺序首次出现
    forms: dict[tuple, int] = {}
    raw: list[dict] = []
    for idx, mat in enumerate(elements):
        refl = _reflection_form(field, mat)
        if refl is None:
            continue
        alpha, i0 = refl
        key = tuple(v.coeffs for v in alpha)
        h = forms.get(key)
        if h is None:
            h = forms[key] = len(raw)
            raw.append({"alpha": alpha, "i0": i0, "refl": []})
        raw[h]["refl"].append(idx)

    hyperplanes: list[Hyperplane] = []
    for info in raw:
        n_h = 1 + len(info["refl"])
        target = field.root_of_unity(n_h) if field.conductor % n_h == 0 else None
        s_h, det_s = None, None
        for idx in info["refl"]:
            mat = elements[idx]
            d = sum((mat[i, i] for i in range(n)), field.zero) - (n - 1)
            if target is None or d == target:
                s_h, det_s = idx, d
                break
        if s_h is None:
            raise UnsupportedGroupError("could not choose a canonical generator of W_H")
        mat = elements[s_h]
        i0 = info["i0"]
        check = tuple(-(mat[i, i0] - (1 if i == i0 else 0)) for i in range(n))
        hyperplanes.append(
            Hyperplane(
                alpha=MPoly.linear(field, info["alpha"]),
                alpha_check=check,
                s_H=s_h,
                n_H=n_h,
                orbit_id=-1,
                det=det_s,
                reflections=info["refl"],
            )
        )

    group = ReflectionGroupData(
        family=family,
        params=tuple(params),
        rank=n,
        conductor=field.conductor,
        field=field,
        elements=elements,
        generators=gen_idx,
        inverses=inverses,
        hyperplanes=hyperplanes,
        orbits=[],
        gram=_gram(family, n, field),
    )
    group._lookup = lookup
    _assign_orbits(group)
    if family.crystallographic:
        group.roots = _roots(group)
    logger.info(
        "built %s: order %d, %d hyperplanes, orbit sizes %s",
        group.label,
        group.order,
        len(hyperplanes),
        [len(o) for o in group.orbits],
    )
    return group


def _assign_orbits(group: ReflectionGroupData) -> None:
    parent = list(range(len(group.hyperplanes)))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for h_idx, h in enumerate(group.hyperplanes):
        for g in group.generators:
            image = act_on_poly(group, g, h.alpha)
            other = _hyperplane_index(group, image)
            ra, rb = find(h_idx), find(other)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    roots: dict[int, int] = {}
    orbits: list[list[int]] = []
    for h_idx, h in enumerate(group.hyperplanes):
        r = find(h_idx)
        if r not in roots:
            roots[r] = len(orbits)
            orbits.append([])
        h.orbit_id = roots[r]
        orbits[roots[r]].append(h_idx)
    group.orbits = orbits


def build_group(family: Family | str, params: tuple, order_cap: int | None = None) -> ReflectionGroupData:
    """
    按族与参数构造反射群。

    参数：
        family: Family 或其字符串标签（"A"、"B"、"I2"、"G" 等）
        params: A/B/C/D 为 (N,)；I2/I2C 为 (k,)；G 为 (r, 1, N)
    """
    from . import group_loader

    if isinstance(family, str):
        try:
            family = Family(family)
        except ValueError as exc:
            raise UnsupportedGroupError(f"unknown family {family!r}") from exc
    params = tuple(params)
    if family is Family.G and params[0] == 2:
        logger.debug("G(2,1,N) is B_N; building it with the G generators")
    _, conductor = _family_setup(family, params)
    field = CyclotomicField.of(conductor)
    gens = _generators(family, params, field)
    cached = group_loader.load_cached_elements(family, params, field)
    group = group_from_generators(field, gens, family, params, order_cap, elements=cached)
    if cached is None:
        group_loader.store_elements(group)
    if family is Family.I2C:
        half = Fraction(1, 2)
        i = field.root_of_unity(4)
        group.bridge = scalar_matrix(field, [[half, half], [1 / (2 * i), -1 / (2 * i)]])
    return group


# -- actions -------------------------------------------------------------------


def act_on_poly(group: ReflectionGroupData, g: int, p: MPoly) -> MPoly:
    """逆步作用 (g·p)(x) = p(g^{-1}x)。"""
    return p.substitute(group.images(g))


def act_on_tuple(group: ReflectionGroupData, g: int, comps) -> list[MPoly]:
    """向量场 Σ f_i ∂_i 上的作用：(g·L)_k = Σ_i g_{ki} (g·f_i)。"""
    mat = group.elements[g]
    moved = [act_on_poly(group, g, f) for f in comps]
    n = group.rank
    out = []
    for k in range(n):
        acc = group.zero()
        for i in range(n):
            c = mat[k, i]
            if c:
                acc = acc + moved[i].scale(c)
        out.append(acc)
    return out


def idempotent_apply(group: ReflectionGroupData, h: Hyperplane, i: int, p: MPoly) -> MPoly:
    """e_{H,i}(p) = Σ_u (det s_H^u)^i · (s_H^u · p)，1 ≤ i ≤ n_H - 1。"""
    if not 1 <= i <= h.n_H - 1:
        raise ValueError(f"idempotent index {i} outside 1..{h.n_H - 1}")
    acc = group.zero()
    cur = p
    lam = h.det**i
    weight = group.field.one
    for _ in range(h.n_H):
        acc = acc + cur.scale(weight)
        cur = act_on_poly(group, h.s_H, cur)
        weight = weight * lam
    return acc


def reynolds(group: ReflectionGroupData, p: MPoly) -> MPoly:
    acc = group.zero()
    for g in range(group.order):
        acc = acc + act_on_poly(group, g, p)
    return acc / group.order


def vstar_character(group: ReflectionGroupData) -> list[CycScalar]:
    """χ_{V*}(w) = tr(w^{-1})，按元素下标排列。"""
    n = group.rank
    out = []
    for g in range(group.order):
        inv = group.elements[group.inverses[g]]
        out.append(sum((inv[i, i] for i in range(n)), group.field.zero))
    return out


def isotypic_project(
    group: ReflectionGroupData,
    p: MPoly,
    character: list[CycScalar] | None = None,
    dim: int | None = None,
) -> MPoly:
    """π_τ = (dim τ/|W|) Σ_w χ_τ(w^{-1})·w；默认 τ = V*。"""
    if character is None:
        character = vstar_character(group)
        dim = group.rank
    acc = group.zero()
    for g in range(group.order):
        c = character[group.inverses[g]]
        if c:
            acc = acc + act_on_poly(group, g, p).scale(c)
    return acc.scale(group.field(Fraction(dim, group.order)))


def invariant_space(group: ReflectionGroupData, degree: int) -> list[MPoly]:
    """((SV*)^W)_d 的基：单项式的 Reynolds 像再做行约化。"""
    monos = monomials_of_degree(group.rank, degree)
    vectors = []
    for e in monos:
        img = reynolds(group, MPoly.monomial(group.field, e))
        if img.terms:
            vectors.append(img.coeff_vector(monos))
    basis = row_reduce_vectors(group.field, vectors)
    return [MPoly.from_vector(group.field, group.rank, monos, v) for v in basis]


def molien_dimension(group: ReflectionGroupData, degree: int) -> int:
    """暴力特征标平均：(1/|W|) Σ_w tr(w | S^d V*)。"""
    fld, n = group.field, group.rank
    total = fld.zero
    for mat in group.elements:
        # det(I - t·w) = Σ_k (-1)^k e_k t^k，e_k 为主子式之和
        char = [fld.one]
        for k in range(1, n + 1):
            ek = fld.zero
            for idx in combinations(range(n), k):
                ek = ek + scalar_det(fld, mat[np.ix_(idx, idx)])
            char.append(ek if k % 2 == 0 else -ek)
        series = [fld.one]
        for d in range(1, degree + 1):
            acc = fld.zero
            for k in range(1, min(d, n) + 1):
                acc = acc - char[k] * series[d - k]
            series.append(acc)
        total = total + series[degree]
    value = total / group.order
    if not value.is_rational() or value.rational().denominator != 1:
        raise ArithmeticError(f"Molien average is not an integer: {value}")
    return int(value.rational())
