"""Exact arithmetic over field towers.

Supported kinds: prime fields GF(p), finite extensions GF(p^m) stored as
polynomial residues over the prime field (towers are flattened to a single
extension at construction), the rationals, and rational-function fields
k(t) over a finite field or Q.

A field handle operates on raw element representations:

    GF(p)       int in range(p)
    GF(p^m)     tuple of m ints (residue coefficients, low-to-high)
    Q           fractions.Fraction
    k(t)        (num, den) pair of coefficient tuples, den monic, reduced

Raw representations are canonical, hashable and comparable, so element
equality is plain ``==`` and enumeration order is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from . import poly


class FieldError(ValueError):
    """Invalid field descriptor or element operation."""


# ---------------------------------------------------------------------------
# descriptors


@dataclass(frozen=True)
class FieldDescriptor:
    """Tagged description of a field; `make_field` turns it into a handle.

    kind is one of "prime", "extension", "rationals", "rational_functions".
    """

    kind: str
    p: Optional[int] = None
    base: Optional["FieldDescriptor"] = None
    modulus: Optional[Tuple] = None  # coefficients over base, low-to-high
    variable: Optional[str] = None

    @staticmethod
    def prime(p: int) -> "FieldDescriptor":
        return FieldDescriptor(kind="prime", p=p)

    @staticmethod
    def extension(base: "FieldDescriptor", modulus) -> "FieldDescriptor":
        return FieldDescriptor(kind="extension", base=base, modulus=tuple(modulus))

    @staticmethod
    def rationals() -> "FieldDescriptor":
        return FieldDescriptor(kind="rationals")

    @staticmethod
    def rational_functions(base: "FieldDescriptor", variable: str = "t") -> "FieldDescriptor":
        return FieldDescriptor(kind="rational_functions", base=base, variable=variable)

    def to_json(self):
        if self.kind == "prime":
            return {"kind": "prime", "p": self.p}
        if self.kind == "extension":
            mod = [c if isinstance(c, int) else list(c) for c in self.modulus]
            return {"kind": "extension", "base": self.base.to_json(), "modulus": mod}
        if self.kind == "rationals":
            return {"kind": "rationals"}
        if self.kind == "rational_functions":
            return {
                "kind": "rational_functions",
                "base": self.base.to_json(),
                "variable": self.variable,
            }
        raise FieldError(f"unknown kind {self.kind!r}")

    @staticmethod
    def from_json(obj) -> "FieldDescriptor":
        kind = obj["kind"]
        if kind == "prime":
            return FieldDescriptor.prime(int(obj["p"]))
        if kind == "extension":
            base = FieldDescriptor.from_json(obj["base"])
            mod = tuple(tuple(c) if isinstance(c, list) else int(c) for c in obj["modulus"])
            return FieldDescriptor.extension(base, mod)
        if kind == "rationals":
            return FieldDescriptor.rationals()
        if kind == "rational_functions":
            return FieldDescriptor.rational_functions(
                FieldDescriptor.from_json(obj["base"]), obj.get("variable", "t")
            )
        raise FieldError(f"unknown kind {kind!r}")


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------
# field handles


class Field:
    """Base class; subclasses implement exact arithmetic on raw elements."""

    characteristic: int
    is_finite: bool = False
    order: Optional[int] = None

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def eq(self, a, b) -> bool:
        return a == b

    def is_zero(self, a) -> bool:
        return self.eq(a, self.zero())

    def from_int(self, n: int):
        raise NotImplementedError

    def elements(self):
        raise NotImplementedError("only finite fields are enumerable")

    def to_str(self, a) -> str:
        raise NotImplementedError

    def from_str(self, s: str):
        raise NotImplementedError

    def __ne__(self, other):
        return not self.__eq__(other)


class PrimeField(Field):
    """GF(p); elements are ints reduced mod p."""

    is_finite = True

    def __init__(self, p: int):
        if not _is_prime(p):
            raise FieldError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.order = p
        self.degree = 1
        self.desc = FieldDescriptor.prime(p)

    def zero(self):
        return 0

    def one(self):
        return 1

    def add(self, a, b):
        return (a + b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def from_int(self, n):
        return n % self.p

    def elements(self):
        return iter(range(self.p))

    def to_str(self, a):
        return str(a)

    def from_str(self, s):
        return int(s) % self.p

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("prime", self.p))


class ExtensionField(Field):
    """GF(p^m) as residues modulo a monic irreducible over GF(p).

    Tower descriptors are flattened before this constructor runs, so the
    modulus always has prime-field coefficients.
    """

    is_finite = True

    def __init__(self, p: int, modulus):
        self.prime = PrimeField(p)
        modulus = poly.pnormal(self.prime, tuple(c % p for c in modulus))
        m = poly.pdeg(modulus)
        if m < 1:
            raise FieldError("extension modulus must have degree >= 1")
        if modulus[-1] != 1:
            raise FieldError("extension modulus must be monic")
        if not poly.is_irreducible(self.prime, modulus):
            raise FieldError(f"modulus {list(modulus)} is reducible over GF({p})")
        self.p = p
        self.modulus = modulus
        self.degree = m
        self.characteristic = p
        self.order = p ** m
        self.desc = FieldDescriptor.extension(FieldDescriptor.prime(p), modulus)
        # small fields get dense product/inverse tables on first use
        self._mul_table = None
        self._inv_table = None

    def _pad(self, coeffs):
        c = list(coeffs) + [0] * (self.degree - len(coeffs))
        return tuple(c[: self.degree])

    def zero(self):
        return self._pad(())

    def one(self):
        return self._pad((1,))

    def generator(self):
        return self._pad((0, 1))

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def neg(self, a):
        return tuple((-x) % self.p for x in a)

    def mul(self, a, b):
        if self.order <= 256:
            if self._mul_table is None:
                self._build_tables()
            return self._mul_table[(a, b)]
        return self._mul_raw(a, b)

    def _mul_raw(self, a, b):
        prod = poly.pmul(self.prime, poly.pnormal(self.prime, a), poly.pnormal(self.prime, b))
        return self._pad(poly.pmod(self.prime, prod, self.modulus))

    def _build_tables(self):
        elems = list(self.elements())
        self._mul_table = {
            (a, b): self._mul_raw(a, b) for a in elems for b in elems
        }
        one = self.one()
        self._inv_table = {}
        for a in elems:
            for b in elems:
                if self._mul_table[(a, b)] == one:
                    self._inv_table[a] = b
                    break

    def inv(self, a):
        if self.order <= 256:
            if self._inv_table is None:
                self._build_tables()
            try:
                return self._inv_table[a]
            except KeyError:
                raise ZeroDivisionError("inverse of zero") from None
        pa = poly.pnormal(self.prime, a)
        if not pa:
            raise ZeroDivisionError("inverse of zero")
        # extended Euclid against the modulus
        r0, r1 = self.modulus, pa
        s0, s1 = (), poly.pone(self.prime)
        while r1:
            q, r = poly.pdivmod(self.prime, r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, poly.psub(self.prime, s0, poly.pmul(self.prime, q, s1))
        c = self.prime.inv(r0[0])  # r0 is a nonzero constant
        return self._pad(poly.pscale(self.prime, c, s0))

    def from_int(self, n):
        return self._pad((n % self.p,))

    def from_coeffs(self, coeffs):
        return self._pad(tuple(c % self.p for c in coeffs))

    def elements(self):
        # lexicographic on residue coefficient tuples
        from itertools import product

        for tup in product(range(self.p), repeat=self.degree):
            yield tup

    def to_str(self, a):
        return ",".join(str(x) for x in a)

    def from_str(self, s):
        return self._pad(tuple(int(x) % self.p for x in s.split(",")))

    def __repr__(self):
        return f"GF({self.p}^{self.degree})"

    def __eq__(self, other):
        return (
            isinstance(other, ExtensionField)
            and other.p == self.p
            and other.modulus == self.modulus
        )

    def __hash__(self):
        return hash(("ext", self.p, self.modulus))


class RationalField(Field):
    """Q with exact big-integer fractions."""

    is_finite = False

    def __init__(self):
        self.characteristic = 0
        self.desc = FieldDescriptor.rationals()

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def from_int(self, n):
        return Fraction(n)

    def to_str(self, a):
        return str(a)

    def from_str(self, s):
        return Fraction(s)

    def __repr__(self):
        return "Q"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("rationals")


class RationalFunctionField(Field):
    """k(t): reduced numerator/denominator pairs with monic denominator.

    A degree cap guards against accidental blowup in iterated arithmetic;
    exceeding it raises FieldError rather than degrading silently.
    """

    is_finite = False

    def __init__(self, base: Field, variable: str = "t", degree_cap: int = 2048):
        if not (base.is_finite or isinstance(base, RationalField)):
            raise FieldError("rational_functions base must be a finite field or Q")
        self.base = base
        self.variable = variable
        self.degree_cap = degree_cap
        self.characteristic = base.characteristic
        self.desc = FieldDescriptor.rational_functions(base.desc, variable)

    def _make(self, num, den):
        B = self.base
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            return ((), (B.one(),))
        g = poly.pgcd(B, num, den)
        if poly.pdeg(g) > 0:
            num = poly.pdivmod(B, num, g)[0]
            den = poly.pdivmod(B, den, g)[0]
        lead = B.inv(den[-1])
        num = poly.pscale(B, lead, num)
        den = poly.pscale(B, lead, den)
        if poly.pdeg(num) > self.degree_cap or poly.pdeg(den) > self.degree_cap:
            raise FieldError(f"rational function degree cap {self.degree_cap} exceeded")
        return (num, den)

    def t(self):
        B = self.base
        return ((B.zero(), B.one()), (B.one(),))

    def from_poly(self, coeffs):
        return self._make(poly.pnormal(self.base, tuple(coeffs)), (self.base.one(),))

    def zero(self):
        return ((), (self.base.one(),))

    def one(self):
        return ((self.base.one(),), (self.base.one(),))

    def add(self, a, b):
        B = self.base
        num = poly.padd(B, poly.pmul(B, a[0], b[1]), poly.pmul(B, b[0], a[1]))
        return self._make(num, poly.pmul(B, a[1], b[1]))

    def neg(self, a):
        return (poly.pneg(self.base, a[0]), a[1])

    def mul(self, a, b):
        B = self.base
        return self._make(poly.pmul(B, a[0], b[0]), poly.pmul(B, a[1], b[1]))

    def inv(self, a):
        if not a[0]:
            raise ZeroDivisionError("inverse of zero")
        return self._make(a[1], a[0])

    def from_int(self, n):
        return self._make((self.base.from_int(n),), (self.base.one(),))

    def to_str(self, a):
        num = ";".join(self.base.to_str(c) for c in a[0])
        den = ";".join(self.base.to_str(c) for c in a[1])
        return f"{num}|{den}"

    def from_str(self, s):
        num_s, _, den_s = s.partition("|")
        num = tuple(self.base.from_str(c) for c in num_s.split(";") if c)
        den = tuple(self.base.from_str(c) for c in den_s.split(";") if c)
        return self._make(poly.pnormal(self.base, num), poly.pnormal(self.base, den))

    def __repr__(self):
        return f"{self.base!r}({self.variable})"

    def __eq__(self, other):
        return (
            isinstance(other, RationalFunctionField)
            and other.base == self.base
            and other.variable == self.variable
        )

    def __hash__(self):
        return hash(("ratfunc", self.base, self.variable))


# ---------------------------------------------------------------------------
# construction, tower flattening

_FLATTEN_ENUM_CAP = 1 << 20


def _flatten_extension(desc: FieldDescriptor):
    """Collapse an extension tower to a single extension over the prime field.

    Returns (field, stage_images): stage_images[i] is the image in the flat
    field of the generator of the i-th tower stage, innermost first.
    """
    base_desc = desc.base
    if base_desc.kind == "prime":
        F = ExtensionField(base_desc.p, desc.modulus)
        return F, [F.generator()]
    if base_desc.kind != "extension":
        raise FieldError("extensions are only supported over finite fields")
    inner, inner_images = _flatten_extension(base_desc)
    outer_deg = len(desc.modulus) - 1
    if outer_deg < 1:
        raise FieldError("extension modulus must have degree >= 1")
    total = inner.degree * outer_deg
    if inner.p ** total > _FLATTEN_ENUM_CAP:
        raise FieldError(f"flattened field GF({inner.p}^{total}) exceeds the desk-scale cap")
    flat = ExtensionField(inner.p, poly.find_irreducible(PrimeField(inner.p), total))
    inner_in_flat = _find_root(flat, [flat.from_int(c) for c in _prime_coeffs(inner)])
    if inner_in_flat is None:
        raise FieldError("tower flattening failed to embed the base stage")
    emb = Embedding(inner, flat, inner_in_flat, check=True)
    mapped_mod = [emb.apply(_as_raw(inner, c)) for c in desc.modulus]
    theta = _find_root(flat, mapped_mod)
    if theta is None:
        raise FieldError("outer modulus is reducible: no root in the flattened field")
    images = [emb.apply(img) for img in inner_images] + [theta]
    return flat, images


def _prime_coeffs(F: ExtensionField):
    return list(F.modulus)


def _as_raw(field: Field, c):
    """Coerce a descriptor coefficient (int or tuple) into a raw element."""
    if isinstance(c, int):
        return field.from_int(c)
    if isinstance(field, ExtensionField):
        return field.from_coeffs(c)
    raise FieldError(f"cannot coerce {c!r} into {field!r}")


def _find_root(F: Field, coeffs):
    """First root in element order of the polynomial with raw coefficients."""
    pol = poly.pnormal(F, tuple(coeffs))
    for x in F.elements():
        if F.is_zero(poly.peval(F, pol, x)):
            return x
    return None


def _verify_q_irreducible(modulus):
    """Irreducibility over Q, delegated to sympy's exact factorization."""
    import sympy

    x = sympy.Symbol("x")
    expr = sum(sympy.Rational(c) * x ** i for i, c in enumerate(modulus))
    p = sympy.Poly(expr, x, domain="QQ")
    if p.degree() < 1:
        raise FieldError("extension modulus must have degree >= 1")
    _, factors = p.factor_list()
    return len(factors) == 1 and factors[0][1] == 1


def make_field(desc: FieldDescriptor) -> Field:
    """Build a field handle; verifies all descriptor invariants."""
    if desc.kind == "prime":
        return PrimeField(desc.p)
    if desc.kind == "rationals":
        return RationalField()
    if desc.kind == "rational_functions":
        return RationalFunctionField(make_field(desc.base), desc.variable or "t")
    if desc.kind == "extension":
        if desc.base.kind == "rationals":
            mod = [Fraction(c) for c in desc.modulus]
            if mod[-1] != 1:
                raise FieldError("extension modulus must be monic")
            if not _verify_q_irreducible(mod):
                raise FieldError("modulus is reducible over Q")
            raise FieldError(
                "number fields are out of scope; the modulus was verified irreducible"
            )
        field, images = _flatten_extension(desc)
        field.stage_images = images
        field.desc_given = desc
        return field
    raise FieldError(f"unknown descriptor kind {desc.kind!r}")


def GF(p: int, m: int = 1) -> Field:
    """Convenience constructor: GF(p^m) with the least irreducible modulus."""
    if m == 1:
        return PrimeField(p)
    base = PrimeField(p)
    return ExtensionField(p, poly.find_irreducible(base, m))


# ---------------------------------------------------------------------------
# embeddings


class Embedding:
    """A verified field homomorphism determined on generators.

    Stores the image of the source generator (for extension sources); prime
    and rational sources embed canonically.  Verification checks the source
    relations and the common prime subfield.
    """

    def __init__(self, source: Field, target: Field, gen_image=None, check=True):
        self.source = source
        self.target = target
        self.gen_image = gen_image
        if check:
            self._verify()

    def _verify(self):
        src, tgt = self.source, self.target
        if src.characteristic != tgt.characteristic:
            raise FieldError("no common prime subfield")
        if isinstance(src, ExtensionField):
            if self.gen_image is None:
                raise FieldError("extension-source embedding needs a generator image")
            val = poly.peval(tgt, [tgt.from_int(c) for c in src.modulus], self.gen_image)
            if not tgt.is_zero(val):
                raise FieldError("relation violated: generator image is not a modulus root")
        elif isinstance(src, (PrimeField, RationalField)):
            pass
        elif isinstance(src, RationalFunctionField):
            raise FieldError("rational-function sources are not supported")
        else:
            raise FieldError(f"unsupported source {src!r}")

    def apply(self, a):
        src, tgt = self.source, self.target
        if src == tgt:
            return a
        if isinstance(src, PrimeField):
            return tgt.from_int(a)
        if isinstance(src, RationalField):
            num = tgt.from_int(a.numerator)
            den = tgt.from_int(a.denominator)
            return tgt.div(num, den)
        if isinstance(src, ExtensionField):
            acc = tgt.zero()
            for c in reversed(a):
                acc = tgt.add(tgt.mul(acc, self.gen_image), tgt.from_int(c))
            return acc
        raise FieldError(f"unsupported source {src!r}")

    def compose(self, outer: "Embedding") -> "Embedding":
        """outer after self (self: A->B, outer: B->C)."""
        if outer.source != self.target:
            raise FieldError("embeddings do not compose: field mismatch")
        img = None
        if isinstance(self.source, ExtensionField):
            img = outer.apply(self.gen_image)
        return Embedding(self.source, outer.target, img, check=True)

    def is_identity(self):
        return self.source == self.target

    def to_json(self):
        img = None
        if self.gen_image is not None:
            img = self.target.to_str(self.gen_image)
        return {
            "source": self.source.desc.to_json(),
            "target": self.target.desc.to_json(),
            "gen_image": img,
        }

    @staticmethod
    def from_json(obj) -> "Embedding":
        src = make_field(FieldDescriptor.from_json(obj["source"]))
        tgt = make_field(FieldDescriptor.from_json(obj["target"]))
        img = obj.get("gen_image")
        return Embedding(src, tgt, tgt.from_str(img) if img is not None else None)

    def __repr__(self):
        return f"Embedding({self.source!r} -> {self.target!r})"


def identity_embedding(field: Field) -> Embedding:
    img = field.generator() if isinstance(field, ExtensionField) else None
    return Embedding(field, field, img, check=True)


def embed(source: Field, target: Field, gen_image=None) -> Embedding:
    """Build a verified embedding; picks the canonical one when unambiguous.

    For extension sources with no image given, the least modulus root in the
    target's element order is chosen; absence of a root is an error.
    """
    if gen_image is not None:
        return Embedding(source, target, gen_image, check=True)
    if source == target:
        return identity_embedding(source)
    if isinstance(source, (PrimeField, RationalField)):
        return Embedding(source, target, None, check=True)
    if isinstance(source, ExtensionField):
        if not getattr(target, "is_finite", False):
            raise FieldError("cannot search for a generator image in an infinite field")
        root = _find_root(target, [target.from_int(c) for c in source.modulus])
        if root is None:
            raise FieldError(
                f"no root of the source modulus in {target!r}: embedding does not exist"
            )
        return Embedding(source, target, root, check=True)
    raise FieldError(f"unsupported source {source!r}")


def find_embeddings(source: Field, target: Field):
    """All embeddings source -> target, in target element order."""
    if isinstance(source, (PrimeField, RationalField)):
        return [embed(source, target)]
    if not isinstance(source, ExtensionField) or not target.is_finite:
        raise FieldError("enumeration needs a finite extension source and finite target")
    out = []
    pol = poly.pnormal(target, tuple(target.from_int(c) for c in source.modulus))
    for x in target.elements():
        if target.is_zero(poly.peval(target, pol, x)):
            out.append(Embedding(source, target, x, check=True))
    return out
