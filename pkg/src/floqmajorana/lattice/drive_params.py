import logging

import numpy as np

from ..exceptions import InvalidParameters

logger = logging.getLogger(__name__)

SEGMENT1_FIELDS = ("J_intra", "J_inter", "Delta_intra", "Delta_inter")
SEGMENT2_FIELDS = ("j_intra", "j_inter", "delta_intra", "delta_inter")
FIELDS = SEGMENT1_FIELDS + SEGMENT2_FIELDS

# Names of the homogeneous scalars in the JSON "uniform" block
UNIFORM_KEYS = {
    "J1": "J_intra",
    "J2": "J_inter",
    "Delta1": "Delta_intra",
    "Delta2": "Delta_inter",
    "j1": "j_intra",
    "j2": "j_inter",
    "delta1": "delta_intra",
    "delta2": "delta_inter",
}

IDEAL_UNIFORM = {
    "J1": np.pi / 2,
    "J2": np.pi / 2,
    "Delta1": np.pi / 2,
    "Delta2": np.pi / 2,
    "j1": 0.0,
    "j2": 2 * np.pi,
    "delta1": 0.0,
    "delta2": 0.0,
}

# Deformed working point used for the braiding correlation plots
OFF_IDEAL_UNIFORM = {
    "J1": np.pi / 2 + 0.14,
    "J2": np.pi / 2 + 0.18,
    "Delta1": np.pi / 2 + 0.1,
    "Delta2": np.pi / 2 - 0.24,
    "j1": 0.06,
    "j2": 2 * np.pi + 0.19,
    "delta1": -0.04,
    "delta2": 0.12,
}


class DriveParams:
    """
    Dimensionless (times T) couplings of the two half-period Hamiltonians.

    Segment 1 (H1) carries real hopping J and pairing Delta, segment 2 (H2)
    carries the imaginary-unit-prefixed hopping j and pairing delta, which may
    hold a complex phase. Every field is a per-site array of length N; the
    inter-cell entry at site N is ignored under open boundaries. The on-site
    bias acts in segment 2 and mu1, mu2 are the chiral-symmetry-breaking terms
    added to segment 1. All wires share the same couplings.

    Instances are immutable: every modifier returns a new DriveParams.
    """

    def __init__(self, N, fields, bias_a=None, bias_b=None, mu1=0.0, mu2=0.0, wires=1):
        """
        Parameters:
        - N: int, number of sites per wire.
        - fields: dict mapping each name of FIELDS to a scalar or a length N array.
        - bias_a, bias_b: optional length N arrays of on-site bias V*T on sublattice A / B.
        - mu1, mu2: float, symmetry-breaking potentials times T.
        - wires: int, number of identical uncoupled wires.
        """
        if int(N) != N or N < 1:
            raise InvalidParameters(f"N must be a positive integer, got {N!r}.")
        if int(wires) != wires or wires < 1:
            raise InvalidParameters(f"wires must be a positive integer, got {wires!r}.")
        unknown = set(fields) - set(FIELDS)
        if unknown:
            raise InvalidParameters(f"Unknown coupling fields {sorted(unknown)}. Choose from {FIELDS}.")

        self.N = int(N)
        self.wires = int(wires)
        for name in FIELDS:
            dtype = float if name in SEGMENT1_FIELDS else complex
            setattr(self, name, self._as_site_array(fields.get(name, 0.0), dtype, name))
        self.bias_a = self._as_site_array(0.0 if bias_a is None else bias_a, float, "bias_a")
        self.bias_b = self._as_site_array(0.0 if bias_b is None else bias_b, float, "bias_b")
        self.mu1 = float(mu1)
        self.mu2 = float(mu2)
        if not (np.isfinite(self.mu1) and np.isfinite(self.mu2)):
            raise InvalidParameters("mu1 and mu2 must be finite.")

    def _as_site_array(self, value, dtype, name):
        value = np.asarray(value)
        if np.iscomplexobj(value) and dtype is float:
            if np.any(value.imag != 0):
                raise InvalidParameters(f"{name} must be real.")
            value = value.real
        if value.ndim == 0:
            value = np.full(self.N, value)
        array = value.astype(dtype)
        if array.shape != (self.N,):
            raise InvalidParameters(f"{name} must have length N={self.N}, got shape {array.shape}.")
        if not np.all(np.isfinite(array)):
            raise InvalidParameters(f"{name} contains non-finite entries.")
        array = array.copy()
        array.setflags(write=False)
        return array

    @classmethod
    def uniform(cls, N, J1=0.0, J2=0.0, Delta1=0.0, Delta2=0.0, j1=0.0, j2=0.0, delta1=0.0, delta2=0.0, mu1=0.0, mu2=0.0, wires=1):
        """
        Homogeneous chain built from the eight scalars J1, J2, Delta1, Delta2, j1, j2, delta1, delta2.

        Returns:
        - DriveParams instance.
        """
        scalars = dict(J1=J1, J2=J2, Delta1=Delta1, Delta2=Delta2, j1=j1, j2=j2, delta1=delta1, delta2=delta2)
        fields = {UNIFORM_KEYS[key]: value for key, value in scalars.items()}
        return cls(N, fields, mu1=mu1, mu2=mu2, wires=wires)

    @classmethod
    def ideal(cls, N, wires=1):
        """Fine-tuned point J1 = J2 = Delta1 = Delta2 = pi/2, j2 = 2 pi, all else zero."""
        return cls.uniform(N, wires=wires, **IDEAL_UNIFORM)

    @classmethod
    def off_ideal(cls, N, wires=1):
        """Deformed working point used for the braiding demonstrations."""
        return cls.uniform(N, wires=wires, **OFF_IDEAL_UNIFORM)

    @property
    def fields(self):
        return {name: getattr(self, name) for name in FIELDS}

    @property
    def n_majoranas(self):
        return 4 * self.N * self.wires

    def replace(self, **changes):
        """
        Copy with some constructor arguments replaced.

        Parameters:
        - changes: any of the FIELDS names, bias_a, bias_b, mu1, mu2, wires.

        Returns:
        - DriveParams instance.
        """
        fields = self.fields
        kwargs = dict(bias_a=self.bias_a, bias_b=self.bias_b, mu1=self.mu1, mu2=self.mu2, wires=self.wires)
        for key, value in changes.items():
            if key in FIELDS:
                fields[key] = value
            elif key in kwargs:
                kwargs[key] = value
            else:
                raise InvalidParameters(f"Unknown parameter {key!r}.")
        return DriveParams(self.N, fields, **kwargs)

    def with_axis(self, axis, value):
        """
        Set one scannable scalar on every site.

        Parameters:
        - axis: a uniform key (e.g. "j2"), a field name (e.g. "j_inter"), "mu1" or "mu2".
        - value: scalar.

        Returns:
        - DriveParams instance.
        """
        if axis in UNIFORM_KEYS:
            axis = UNIFORM_KEYS[axis]
        if axis in FIELDS or axis in ("mu1", "mu2"):
            return self.replace(**{axis: value})
        raise InvalidParameters(f"Cannot scan over {axis!r}. Choose a uniform key, a field name, mu1 or mu2.")

    def with_overrides(self, overrides):
        """
        Apply per-site overrides.

        Parameters:
        - overrides: iterable of (site, field, value) tuples with 1-based sites, or dicts
          {"site", "field", "value", "phase"}; the phase multiplies the value by exp(i phase).

        Returns:
        - DriveParams instance.
        """
        fields = {name: np.array(array) for name, array in self.fields.items()}
        for override in overrides:
            if isinstance(override, dict):
                site, field, value = override["site"], override["field"], override["value"]
                phase = override.get("phase", 0.0)
                if phase:
                    value = value * np.exp(1j * phase)
            else:
                site, field, value = override
            if field not in FIELDS:
                raise InvalidParameters(f"Unknown field {field!r} in override. Choose from {FIELDS}.")
            if not 1 <= site <= self.N:
                raise InvalidParameters(f"Override site {site} outside 1..{self.N}.")
            if field in SEGMENT1_FIELDS and np.imag(value) != 0:
                raise InvalidParameters(f"{field} is a segment-1 coupling and must be real.")
            fields[field][site - 1] = np.real(value) if field in SEGMENT1_FIELDS else value
        return self.replace(**fields)

    def with_bias(self, site, value, sublattice="A"):
        """
        Set the segment-2 on-site bias V*T of one site.

        Parameters:
        - site: int, 1-based site.
        - value: float, bias times T.
        - sublattice: "A" or "B".

        Returns:
        - DriveParams instance.
        """
        if not 1 <= site <= self.N:
            raise InvalidParameters(f"Bias site {site} outside 1..{self.N}.")
        if sublattice not in ("A", "B"):
            raise InvalidParameters(f"Invalid sublattice {sublattice!r}. Choose from ('A', 'B').")
        key = "bias_a" if sublattice == "A" else "bias_b"
        bias = np.array(getattr(self, key))
        bias[site - 1] = value
        return self.replace(**{key: bias})

    def is_homogeneous(self):
        """True when every coupling array is constant and no bias is set."""
        for array in self.fields.values():
            if not np.all(array == array[0]):
                return False
        return not (np.any(self.bias_a) or np.any(self.bias_b))

    def uniform_values(self):
        """
        Eight homogeneous scalars keyed by J1, J2, ... (first-site values).

        Returns:
        - dict of complex/float scalars.
        """
        values = {}
        for key, name in UNIFORM_KEYS.items():
            value = getattr(self, name)[0]
            values[key] = float(value) if name in SEGMENT1_FIELDS else complex(value)
        return values

    def max_deviation(self, other):
        """
        Largest absolute difference of any parameter between two DriveParams of equal size.

        Returns:
        - float.
        """
        if (self.N, self.wires) != (other.N, other.wires):
            raise InvalidParameters("Cannot compare DriveParams of different sizes.")
        deviation = abs(self.mu1 - other.mu1)
        deviation = max(deviation, abs(self.mu2 - other.mu2))
        for name in FIELDS + ("bias_a", "bias_b"):
            deviation = max(deviation, float(np.max(np.abs(getattr(self, name) - getattr(other, name)))))
        return deviation

    def to_dict(self):
        """
        JSON-ready description: the first-site values as "uniform" plus one override per deviating site.

        Returns:
        - dict following the parameter-file schema.
        """
        uniform = {}
        overrides = []
        for key, name in UNIFORM_KEYS.items():
            array = getattr(self, name)
            base = array[0]
            uniform[key] = _json_number(base)
            for site in range(2, self.N + 1):
                if array[site - 1] != base:
                    overrides.append({"site": site, "field": name, "value": _json_number(array[site - 1])})
        bias = []
        for sublattice, array in (("A", self.bias_a), ("B", self.bias_b)):
            for site in np.flatnonzero(array) + 1:
                bias.append({"site": int(site), "sublattice": sublattice, "value": float(array[site - 1])})
        return {
            "N": self.N,
            "wires": self.wires,
            "uniform": uniform,
            "overrides": overrides,
            "bias": bias,
            "mu1": self.mu1,
            "mu2": self.mu2,
        }

    @classmethod
    def from_dict(cls, data):
        """
        Build from the parameter-file schema.

        Parameters:
        - data: dict with keys "N", "uniform" and optionally "overrides", "bias", "mu1", "mu2", "wires".
          Complex values are given either as [re, im] pairs or through an override "phase".

        Returns:
        - DriveParams instance.
        """
        if "N" not in data:
            raise InvalidParameters("Parameter file needs an 'N' entry.")
        uniform = {key: _parse_number(value) for key, value in data.get("uniform", {}).items()}
        unknown = set(uniform) - set(UNIFORM_KEYS)
        if unknown:
            raise InvalidParameters(f"Unknown uniform keys {sorted(unknown)}. Choose from {sorted(UNIFORM_KEYS)}.")
        params = cls.uniform(data["N"], mu1=data.get("mu1", 0.0), mu2=data.get("mu2", 0.0), wires=data.get("wires", 1), **uniform)
        overrides = []
        for entry in data.get("overrides", []):
            entry = dict(entry)
            entry["value"] = _parse_number(entry["value"])
            overrides.append(entry)
        params = params.with_overrides(overrides)
        for entry in data.get("bias", []):
            params = params.with_bias(entry["site"], entry["value"], entry.get("sublattice", "A"))
        return params

    def __eq__(self, other):
        if not isinstance(other, DriveParams):
            return NotImplemented
        return (self.N, self.wires) == (other.N, other.wires) and self.max_deviation(other) == 0.0

    def __repr__(self):
        kind = "homogeneous" if self.is_homogeneous() else "site-dependent"
        return f"DriveParams(N={self.N}, wires={self.wires}, {kind}, mu1={self.mu1}, mu2={self.mu2})"


def _json_number(value):
    value = complex(value)
    if value.imag == 0:
        return value.real
    return [value.real, value.imag]


def _parse_number(value):
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise InvalidParameters(f"Complex values are written as [re, im], got {value!r}.")
        return complex(value[0], value[1])
    return value
