from importlib.metadata import PackageNotFoundError, version

DISTRIBUTION = "floquet-majorana"

try:
    __version__ = version(DISTRIBUTION)
except PackageNotFoundError:
    # Source checkout without an installed distribution
    __version__ = "0.1.0"
