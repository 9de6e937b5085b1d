class BridgeError(Exception):
    category = "internal"


class BridgeConfigError(BridgeError):
    category = "config"


class CheckpointLoadError(BridgeError):
    category = "checkpoint-load"


class DeviceUnavailableError(BridgeError):
    category = "device-unavailable"


class IndexOutOfRangeError(BridgeError):
    category = "index-out-of-range"
