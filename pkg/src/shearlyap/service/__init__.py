"""Service layer: pydantic request/response models, operations, FastAPI app."""
