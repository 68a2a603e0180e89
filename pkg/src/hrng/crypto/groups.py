"""Prime-order groups used for Pedersen commitments.

Two backends share one small interface (``identity``, ``op``, ``exp``,
``contains``, ``encode``/``decode``):

* :class:`SchnorrGroup` -- the order-``p`` subgroup of ``(Z/qZ)^*``. The tiny
  instance (q=23, p=11) is small enough to brute-force.
* :class:`ShortWeierstrassCurve` -- a prime-order curve ``y^2 = x^3 + b``
  with cofactor 1 (secp256k1, alt_bn128 G1). Points are affine tuples,
  ``None`` is the point at infinity.

Group operations are written multiplicatively (``op`` is the group law,
``exp`` is repeated application) regardless of backend.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Hashable

from ..errors import InvalidElement


def is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic for n < 3.3e24, strong probabilistic beyond
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Group:
    name: str
    order: int

    def identity(self) -> Hashable:
        raise NotImplementedError

    def op(self, a, b):
        raise NotImplementedError

    def exp(self, a, k: int):
        raise NotImplementedError

    def contains(self, a) -> bool:
        raise NotImplementedError

    def killed_by_order(self, a) -> bool:
        """True iff ``a`` raised to the (unreduced) group order is the identity."""
        raise NotImplementedError

    def encode(self, a) -> Any:
        """JSON-friendly form; integers become decimal strings."""
        raise NotImplementedError

    def decode(self, obj: Any):
        raise NotImplementedError


@dataclass(frozen=True)
class SchnorrGroup(Group):
    modulus: int
    order: int
    name: str = "schnorr"

    def __post_init__(self):
        if (self.modulus - 1) % self.order:
            raise ValueError("order must divide modulus - 1")

    def identity(self) -> int:
        return 1

    def op(self, a: int, b: int) -> int:
        return a * b % self.modulus

    def exp(self, a: int, k: int) -> int:
        return pow(a, k % self.order, self.modulus)

    def contains(self, a) -> bool:
        return (
            isinstance(a, int)
            and 0 < a < self.modulus
            and pow(a, self.order, self.modulus) == 1
        )

    def killed_by_order(self, a: int) -> bool:
        return pow(a, self.order, self.modulus) == 1

    def encode(self, a: int) -> str:
        return str(a)

    def decode(self, obj: Any) -> int:
        try:
            a = int(obj)
        except (TypeError, ValueError) as exc:
            raise InvalidElement(f"not an integer: {obj!r}") from exc
        if not isinstance(obj, str) or not self.contains(a):
            raise InvalidElement(f"not a subgroup element: {obj!r}")
        return a

    def hash_to_group(self, dst: bytes):
        cofactor = (self.modulus - 1) // self.order
        ctr = 0
        while True:
            x = _hash_int(dst, ctr) % self.modulus
            e = pow(x, cofactor, self.modulus) if x else 0
            if e not in (0, 1):
                return e
            ctr += 1


Point = tuple[int, int] | None


@dataclass(frozen=True)
class ShortWeierstrassCurve(Group):
    """``y^2 = x^3 + b`` over GF(field), cofactor 1, prime ``order``."""

    field_modulus: int
    b: int
    order: int
    gx: int
    gy: int
    name: str = "curve"
    _base: Point = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self):
        object.__setattr__(self, "_base", (self.gx, self.gy))
        if not self.contains(self._base):
            raise ValueError("base point not on curve")

    @property
    def base(self) -> Point:
        return self._base

    def identity(self) -> Point:
        return None

    def on_curve(self, P: Point) -> bool:
        if P is None:
            return True
        x, y = P
        q = self.field_modulus
        return (y * y - x * x * x - self.b) % q == 0

    def contains(self, P) -> bool:
        if P is None:
            return True
        if not (isinstance(P, tuple) and len(P) == 2):
            return False
        x, y = P
        q = self.field_modulus
        return 0 <= x < q and 0 <= y < q and self.on_curve(P)

    # Jacobian coordinates: (X, Y, Z) ~ (X/Z^2, Y/Z^3)
    def _to_jac(self, P: Point):
        return (0, 1, 0) if P is None else (P[0], P[1], 1)

    def _from_jac(self, J) -> Point:
        X, Y, Z = J
        if Z == 0:
            return None
        q = self.field_modulus
        zi = pow(Z, -1, q)
        zi2 = zi * zi % q
        return (X * zi2 % q, Y * zi2 * zi % q)

    def _jdouble(self, J):
        X, Y, Z = J
        q = self.field_modulus
        if Z == 0 or Y == 0:
            return (0, 1, 0)
        YY = Y * Y % q
        S = 4 * X * YY % q
        M = 3 * X * X % q
        X3 = (M * M - 2 * S) % q
        Y3 = (M * (S - X3) - 8 * YY * YY) % q
        Z3 = 2 * Y * Z % q
        return (X3, Y3, Z3)

    def _jadd(self, J1, J2):
        X1, Y1, Z1 = J1
        X2, Y2, Z2 = J2
        if Z1 == 0:
            return J2
        if Z2 == 0:
            return J1
        q = self.field_modulus
        Z1Z1 = Z1 * Z1 % q
        Z2Z2 = Z2 * Z2 % q
        U1 = X1 * Z2Z2 % q
        U2 = X2 * Z1Z1 % q
        S1 = Y1 * Z2 * Z2Z2 % q
        S2 = Y2 * Z1 * Z1Z1 % q
        if U1 == U2:
            if S1 != S2:
                return (0, 1, 0)
            return self._jdouble(J1)
        H = (U2 - U1) % q
        R = (S2 - S1) % q
        HH = H * H % q
        HHH = H * HH % q
        V = U1 * HH % q
        X3 = (R * R - HHH - 2 * V) % q
        Y3 = (R * (V - X3) - S1 * HHH) % q
        Z3 = H * Z1 * Z2 % q
        return (X3, Y3, Z3)

    def op(self, P: Point, Q: Point) -> Point:
        return self._from_jac(self._jadd(self._to_jac(P), self._to_jac(Q)))

    def exp(self, P: Point, k: int) -> Point:
        return self._mul(P, k % self.order)

    def _mul(self, P: Point, k: int) -> Point:
        if k == 0 or P is None:
            return None
        acc = (0, 1, 0)
        J = self._to_jac(P)
        for bit in bin(k)[2:]:
            acc = self._jdouble(acc)
            if bit == "1":
                acc = self._jadd(acc, J)
        return self._from_jac(acc)

    def killed_by_order(self, P: Point) -> bool:
        return self._mul(P, self.order) is None

    def encode(self, P: Point) -> list[str]:
        return [] if P is None else [str(P[0]), str(P[1])]

    def decode(self, obj: Any) -> Point:
        if obj == []:
            return None
        if not (
            isinstance(obj, list)
            and len(obj) == 2
            and all(isinstance(v, str) for v in obj)
        ):
            raise InvalidElement(f"malformed point: {obj!r}")
        try:
            P = (int(obj[0]), int(obj[1]))
        except ValueError as exc:
            raise InvalidElement(f"malformed point: {obj!r}") from exc
        if not self.contains(P):
            raise InvalidElement(f"point not on curve: {obj!r}")
        return P

    def hash_to_group(self, dst: bytes) -> Point:
        """Try-and-increment; nobody learns the discrete log of the result."""
        q = self.field_modulus
        if q % 4 != 3:
            raise NotImplementedError("sqrt only implemented for q = 3 mod 4")
        ctr = 0
        while True:
            x = _hash_int(dst, ctr) % q
            rhs = (x * x * x + self.b) % q
            y = pow(rhs, (q + 1) // 4, q)
            if y * y % q == rhs and rhs != 0:
                if y & 1:
                    y = q - y
                return (x, y)
            ctr += 1


def _hash_int(dst: bytes, ctr: int) -> int:
    h = hashlib.sha512(dst + b"/" + ctr.to_bytes(4, "big")).digest()
    return int.from_bytes(h, "big")


@dataclass(frozen=True)
class GroupParams:
    """A group plus two independent generators ``g`` and ``h``."""

    group: Group
    generator_g: Any
    generator_h: Any
    description: str = ""

    @property
    def p(self) -> int:
        return self.group.order

    @property
    def group_order_p(self) -> int:
        return self.group.order

    def check(self) -> None:
        grp = self.group
        if not is_probable_prime(grp.order):
            raise ValueError("group order is not prime")
        for gen in (self.generator_g, self.generator_h):
            if gen == grp.identity() or not grp.contains(gen):
                raise ValueError("generator outside the group")
            if not grp.killed_by_order(gen):
                raise ValueError("generator order does not divide p")

    def with_group(self, group: Group) -> "GroupParams":
        return GroupParams(group, self.generator_g, self.generator_h, self.description)


H_DOMAIN = b"hrng/pedersen/generator-h/v1"

SECP256K1 = ShortWeierstrassCurve(
    field_modulus=0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEFFFFFC2F,
    b=7,
    order=0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEBAAEDCE6AF48A03BBFD25E8CD0364141,
    gx=0x79BE667EF9DCBBAC55A06295CE870B07029BFCDB2DCE28D959F2815B16F81798,
    gy=0x483ADA7726A3C4655DA4FBFC0E1108A8FD17B448A68554199C47D08FFB10D4B8,
    name="secp256k1",
)

ALT_BN128 = ShortWeierstrassCurve(
    field_modulus=21888242871839275222246405745257275088696311157297823662689037894645226208583,
    b=3,
    order=21888242871839275222246405745257275088548364400416034343698204186575808495617,
    gx=1,
    gy=2,
    name="alt_bn128",
)

TINY = SchnorrGroup(modulus=23, order=11, name="tiny-z23")


def tiny_group() -> GroupParams:
    """Order-11 subgroup of (Z/23Z)^*, g=2, h=3. Brute-forceable; insecure."""
    return GroupParams(TINY, 2, 3, "order-11 subgroup of Z/23Z*, g=2, h=3")


@lru_cache(maxsize=None)
def secp256k1_group() -> GroupParams:
    h = SECP256K1.hash_to_group(H_DOMAIN)
    return GroupParams(SECP256K1, SECP256K1.base, h, "secp256k1, h = hash_to_curve")


@lru_cache(maxsize=None)
def alt_bn128_group() -> GroupParams:
    h = ALT_BN128.hash_to_group(H_DOMAIN)
    return GroupParams(ALT_BN128, ALT_BN128.base, h, "alt_bn128 G1, h = hash_to_curve")


GROUPS = {
    "tiny": tiny_group,
    "secp256k1": secp256k1_group,
    "alt_bn128": alt_bn128_group,
}


def group_by_name(name: str) -> GroupParams:
    try:
        return GROUPS[name]()
    except KeyError:
        raise ValueError(f"unknown group {name!r}; choose from {sorted(GROUPS)}") from None
