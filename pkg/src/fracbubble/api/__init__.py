"""Service layer: FastAPI app plus pydantic schemas."""
