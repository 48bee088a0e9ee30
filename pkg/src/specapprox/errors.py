"""Exception hierarchy with machine-readable error codes.

Codes surface in the CLI error report; exit codes group errors into
configuration problems (2), data problems (3), and everything else (4).
"""

from __future__ import annotations


class SpecApproxError(Exception):
    code = "INTERNAL_ERROR"
    exit_code = 4


class ConfigError(SpecApproxError):
    code = "CONFIG_ERROR"
    exit_code = 2


class InvalidParamsError(ConfigError):
    code = "INVALID_PARAMS"


class DataError(SpecApproxError):
    code = "DATA_ERROR"
    exit_code = 3


class DuplicateIdError(DataError):
    code = "DUPLICATE_ID"


class UnknownSeedIdError(DataError):
    code = "UNKNOWN_SEED_ID"


class EmptySeedError(DataError):
    code = "EMPTY_SEED"


class EmptyDirectoryError(DataError):
    code = "EMPTY_DIRECTORY"


class ProfileCorpusMismatchError(DataError):
    code = "PROFILE_CORPUS_MISMATCH"


class CorpusMismatchError(DataError):
    code = "CORPUS_MISMATCH"
