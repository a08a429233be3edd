from dataclasses import dataclass

from ..exceptions import InvalidParameters

SUBLATTICES = ("A", "B")
SPECIES = ("alpha", "beta")


@dataclass(frozen=True)
class MajoranaIndex:
    """
    Label of one Majorana operator gamma_{s,i}^{alpha/beta} on a given wire.

    The flattened position is ordered (wire, site, sublattice, species)
    lexicographically, so (site=1, A, alpha, wire=0) is index 0 and the fermion
    mode c_{s,i} owns the consecutive pair (alpha, beta).
    """
    site: int
    sublattice: str
    species: str
    wire: int = 0

    def __post_init__(self):
        if self.sublattice not in SUBLATTICES:
            raise InvalidParameters(f"Invalid sublattice {self.sublattice!r}. Choose from {SUBLATTICES}.")
        if self.species not in SPECIES:
            raise InvalidParameters(f"Invalid species {self.species!r}. Choose from {SPECIES}.")
        if self.site < 1:
            raise InvalidParameters("Sites are numbered from 1.")
        if self.wire < 0:
            raise InvalidParameters("Wire index must be non-negative.")

    def flatten(self, N):
        """
        Position of this Majorana in the 4*N*W dimensional real vector space.

        Parameters:
        - N: number of sites per wire.

        Returns:
        - int, flattened index.
        """
        if self.site > N:
            raise InvalidParameters(f"Site {self.site} outside a chain of {N} sites.")
        mode = fermion_mode(self.site, self.sublattice, N, self.wire)
        return 2 * mode + SPECIES.index(self.species)

    @classmethod
    def from_flat(cls, index, N):
        """
        Inverse of flatten.

        Parameters:
        - index: flattened Majorana index.
        - N: number of sites per wire.

        Returns:
        - MajoranaIndex instance.
        """
        if index < 0:
            raise InvalidParameters("Flattened index must be non-negative.")
        mode, species = divmod(index, 2)
        cell, sublattice = divmod(mode, 2)
        wire, site = divmod(cell, N)
        return cls(site + 1, SUBLATTICES[sublattice], SPECIES[species], wire)


def fermion_mode(site, sublattice, N, wire=0):
    """Index of the complex fermion c_{sublattice, site} on the given wire."""
    return (wire * N + site - 1) * 2 + SUBLATTICES.index(sublattice)


def majorana_index(site, sublattice, species, N, wire=0):
    """Shortcut for MajoranaIndex(site, sublattice, species, wire).flatten(N)."""
    return MajoranaIndex(site, sublattice, species, wire).flatten(N)
