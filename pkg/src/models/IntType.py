"""IntType model: fixed-width two's-complement integer types."""

from dataclasses import dataclass


@dataclass(frozen=True)
class IntType:
    """A fixed-width integer type of the mini language.

    All arithmetic wraps modulo 2^bits; values are kept in the canonical
    range of the type (signed or unsigned).

    Attributes:
        bits (int): Width in bits, 32 or 64
        signed (bool): Two's-complement signed if True, unsigned otherwise
    """

    bits: int
    signed: bool

    def __post_init__(self):
        if self.bits not in (32, 64):
            raise ValueError(f"Unsupported integer width: {self.bits}")

    @property
    def modulus(self) -> int:
        return 1 << self.bits

    @property
    def min_value(self) -> int:
        return -(1 << (self.bits - 1)) if self.signed else 0

    @property
    def max_value(self) -> int:
        return (1 << (self.bits - 1)) - 1 if self.signed else (1 << self.bits) - 1

    def wrap(self, value: int) -> int:
        """Reduce an arbitrary integer into this type's range.

        Args:
            value: Any Python integer

        Returns:
            int: The value modulo 2^bits, reinterpreted as signed if needed
        """
        value &= self.modulus - 1
        if self.signed and value > self.max_value:
            value -= self.modulus
        return value

    def fits(self, value: int) -> bool:
        return self.min_value <= value <= self.max_value

    def as_unsigned(self) -> 'IntType':
        """Unsigned type of the same width (the logical counter type)."""
        return IntType(self.bits, False)

    @property
    def keyword(self) -> str:
        """Source-language spelling (``int``, ``uint``, ``long``, ``ulong``)."""
        base = 'int' if self.bits == 32 else 'long'
        return base if self.signed else f"u{base}"

    @property
    def c_name(self) -> str:
        """C spelling used in AST dumps."""
        base = 'int' if self.bits == 32 else 'long'
        return base if self.signed else f"unsigned {base}"

    @property
    def ir_name(self) -> str:
        return f"{'i' if self.signed else 'u'}{self.bits}"

    @property
    def literal_suffix(self) -> str:
        return ('' if self.signed else 'u') + ('' if self.bits == 32 else 'L')

    @staticmethod
    def promote(a: 'IntType', b: 'IntType') -> 'IntType':
        """Common type of a binary operation.

        Operands promote to the wider type; at equal width unsigned wins.
        """
        if a.bits != b.bits:
            return a if a.bits > b.bits else b
        return IntType(a.bits, a.signed and b.signed)

    @classmethod
    def from_keyword(cls, keyword: str) -> 'IntType':
        try:
            return TYPE_KEYWORDS[keyword]
        except KeyError:
            raise ValueError(f"Unknown type name: {keyword}") from None

    @classmethod
    def from_ir_name(cls, name: str) -> 'IntType':
        if len(name) < 3 or name[0] not in 'iu' or name[1:] not in ('32', '64'):
            raise ValueError(f"Unknown IR type: {name}")
        return cls(int(name[1:]), name[0] == 'i')

    def __str__(self) -> str:
        return self.keyword


INT = IntType(32, True)
UINT = IntType(32, False)
LONG = IntType(64, True)
ULONG = IntType(64, False)

TYPE_KEYWORDS = {'int': INT, 'uint': UINT, 'long': LONG, 'ulong': ULONG}
