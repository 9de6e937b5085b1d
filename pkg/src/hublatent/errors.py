"""Exception hierarchy shared across the toolkit.

Every error carries a short machine-readable ``category`` used by the CLI
when reporting failures on stderr.
"""


class HublatentError(Exception):
    category = "internal"


class ConfigError(HublatentError):
    category = "config"


class ZeroVectorError(HublatentError):
    category = "zero-vector"

    def __init__(self, index):
        self.index = index
        super().__init__(f"vector at index {index} has zero norm")


class EmptySetError(HublatentError):
    category = "empty-set"


class KTooLargeError(HublatentError):
    category = "k-too-large"


class IndexOutOfRangeError(HublatentError):
    category = "index-out-of-range"


class BatchExhaustionError(HublatentError):
    category = "batch-exhaustion"


class DimensionMismatchError(HublatentError):
    category = "dimension-mismatch"


class EmptyHubSetError(HublatentError):
    category = "empty-hub-set"


class AllZeroError(HublatentError):
    category = "all-zero"


class ClassCountMismatchError(HublatentError):
    category = "class-count-mismatch"


class LatentFileError(HublatentError):
    category = "latent-file"


class BadMagicError(LatentFileError):
    category = "bad-magic"


class UnsupportedVersionError(LatentFileError):
    category = "unsupported-version"


class TruncatedPayloadError(LatentFileError):
    category = "truncated-payload"


class MetadataParseError(LatentFileError):
    category = "metadata-parse"
