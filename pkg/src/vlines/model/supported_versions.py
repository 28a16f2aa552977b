SUPPORTED_VERSIONS = [
    # Tower, complex and map documents.
    # Current version
    "v1.0.0",
]

CURRENT_VERSION = SUPPORTED_VERSIONS[-1]
