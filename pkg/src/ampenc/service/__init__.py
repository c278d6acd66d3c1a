"""HTTP service layer: pydantic schemas, command handlers, FastAPI app."""
