"""Configuration management using Pydantic settings."""
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Toolkit settings loaded from environment variables."""
    
    # Precision
    CL_PRECISION: int = 256  # bits
    CL_MAX_PRECISION: int = 4096
    
    # Galois sampling
    GALOIS_SAMPLE_PRIMES: int = 25
    MAX_SPLITTING_DEGREE: int = 5040
    
    # Lattice reduction and enumeration
    SVP_MAX_RANK: int = 12
    LLL_DELTA: str = "99/100"
    ROUNDING_TOLERANCE: float = 1e-6
    ORDERING_CHECK_MAX_RANK: int = 7
    
    # Scans
    SCAN_MAX_BOX_VOLUME: int = 10_000_000
    SCAN_WORKERS: int = 0  # 0 runs in-process
    SCAN_CHUNK_SIZE: int = 64
    
    # API Settings
    API_HOST: str = "0.0.0.0"
    API_PORT: int = 8000
    APP_VERSION: str = "1.0.0"
    
    # Logging
    LOG_LEVEL: str = "INFO"
    
    class Config:
        env_file = ".env"
        case_sensitive = True


settings = Settings()
