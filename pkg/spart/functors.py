"""The level permuting functor Perm and the flattening functor Flat."""
from typing import TYPE_CHECKING, Dict, List, NamedTuple, Optional

from .partition import (
    Color,
    ColorWord,
    LevelMismatch,
    Permutation,
    Point,
    RangeError,
    SpatialPartition,
    _canonical,
    check_word,
    conjugate_word,
)

if TYPE_CHECKING:
    from .category import CategorySet


#### $ Perm ####
def perm_apply(
    sigma: Permutation, tau: Permutation, p: SpatialPartition
) -> SpatialPartition:
    """Relabel white point levels by sigma and black point levels by tau."""
    if sigma.size != p.m or tau.size != p.m:
        raise LevelMismatch(
            f"permutations on {sigma.size}/{tau.size} levels cannot act on {p.m} levels"
        )
    word = p.up + p.low

    def move(pt: Point) -> Point:
        perm = sigma if word[pt.column - 1] == Color.WHITE.value else tau
        return Point(pt.column, perm(pt.level))

    return _canonical(p.m, p.up, p.low, ([move(pt) for pt in b] for b in p.blocks))


def perm_category(
    cat: "CategorySet", sigma: Permutation, tau: Permutation
) -> "CategorySet":
    """The image of a bounded category under Perm_{sigma,tau}."""
    from .category import CategorySet

    image = CategorySet(
        cat.m, cat.bound, [perm_apply(sigma, tau, g) for g in cat.generators]
    )
    for p in cat:
        image.add(perm_apply(sigma, tau, p))
    image.closed, image.truncated = cat.closed, cat.truncated
    return image


#### $ Flat ####
class FlatSignature(NamedTuple):
    """Flattening m*d levels onto m levels along the word z, d = |z|."""

    m: int
    z: ColorWord

    @classmethod
    def of(cls, m: int, z: ColorWord) -> "FlatSignature":
        check_word(z)
        if m < 1 or not z:
            raise RangeError("a flat signature needs m >= 1 and a nonempty word z")
        return cls(m, z)

    @property
    def d(self) -> int:
        return len(self.z)

    @property
    def source_levels(self) -> int:
        return self.m * self.d

    @property
    def z_bar(self) -> ColorWord:
        return conjugate_word(self.z)


def varphi(sig: FlatSignature, x: ColorWord, y: ColorWord, pt: Point) -> Point:
    """Send a point of the m*d level grid over xy to the flattened m level grid.

    Level j + k*m of column i goes to column (i-1)*d + k + 1 for a white
    column and to column i*d - k for a black one, keeping level j.
    """
    word = x + y
    if not (1 <= pt.column <= len(word) and 1 <= pt.level <= sig.source_levels):
        raise RangeError(
            f"point {pt} lies outside the {len(word)} x {sig.source_levels} grid"
        )
    k, j = divmod(pt.level - 1, sig.m)
    i, d = pt.column, sig.d
    if word[i - 1] == Color.WHITE.value:
        return Point(i * d - d + k + 1, j + 1)
    return Point(i * d - k, j + 1)


def flat_color(sig: FlatSignature, w: ColorWord) -> ColorWord:
    z, z_bar = sig.z, sig.z_bar
    return "".join(z if letter == Color.WHITE.value else z_bar for letter in w)


def flat_apply(sig: FlatSignature, p: SpatialPartition) -> SpatialPartition:
    if p.m != sig.source_levels:
        raise LevelMismatch(
            f"Flat_{{{sig.m},{sig.z}}} needs {sig.source_levels} levels, got {p.m}"
        )
    return _canonical(
        sig.m,
        flat_color(sig, p.up),
        flat_color(sig, p.low),
        ([varphi(sig, p.up, p.low, pt) for pt in block] for block in p.blocks),
    )


def factor_word(sig: FlatSignature, word: ColorWord) -> Optional[ColorWord]:
    """Leftmost greedy factorization of word into z (w) and z-bar (b) blocks."""
    d, letters = sig.d, []
    for start in range(0, len(word), d):
        chunk = word[start : start + d]
        if chunk == sig.z:
            letters.append(Color.WHITE.value)
        elif chunk == sig.z_bar:
            letters.append(Color.BLACK.value)
        else:
            return None
    return "".join(letters)


def flat_preimage(
    sig: FlatSignature,
    q: SpatialPartition,
    up: Optional[ColorWord] = None,
    low: Optional[ColorWord] = None,
) -> Optional[SpatialPartition]:
    """The unique p with flat_apply(sig, p) == q, or None if the colors do not factor.

    The source words may be given explicitly, which matters when z and z-bar
    coincide as words; otherwise they are factored leftmost greedy.
    """
    if q.m != sig.m:
        raise LevelMismatch(f"expected a partition on {sig.m} levels, got {q.m}")
    x = factor_word(sig, q.up) if up is None else up
    y = factor_word(sig, q.low) if low is None else low
    if x is None or y is None:
        return None
    if flat_color(sig, x) != q.up or flat_color(sig, y) != q.low:
        return None

    back: Dict[Point, Point] = {}
    for column in range(1, len(x) + len(y) + 1):
        for level in range(1, sig.source_levels + 1):
            pt = Point(column, level)
            back[varphi(sig, x, y, pt)] = pt

    return _canonical(
        sig.source_levels, x, y, ([back[pt] for pt in block] for block in q.blocks)
    )


def word_factorizations(sig: FlatSignature, word: ColorWord) -> List[ColorWord]:
    """Every source word whose flattening is word."""
    if len(word) % sig.d:
        return []
    found = [""]
    for start in range(0, len(word), sig.d):
        chunk = word[start : start + sig.d]
        letters = [
            letter
            for letter, block in ((Color.WHITE.value, sig.z), (Color.BLACK.value, sig.z_bar))
            if chunk == block
        ]
        found = [prefix + letter for prefix in found for letter in letters]
    return found


def flat_preimage_category(cat: "CategorySet", sig: FlatSignature) -> "CategorySet":
    """Flat^{-1}(C) restricted to the stored hom-sets of a bounded category."""
    from .category import CategorySet

    def preimages(parts) -> List[SpatialPartition]:
        found = []
        for q in parts:
            for x in word_factorizations(sig, q.up):
                for y in word_factorizations(sig, q.low):
                    found.append(flat_preimage(sig, q, x, y))
        return found

    image = CategorySet(sig.source_levels, cat.bound // sig.d, preimages(cat.generators))
    for p in preimages(cat):
        image.add(p)
    image.closed, image.truncated = cat.closed, cat.truncated
    return image
