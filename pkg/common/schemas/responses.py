from typing import Any, Generic, TypeVar

from pydantic import BaseModel, Field

T = TypeVar("T")


class EngineResponse(BaseModel, Generic[T]):
    """
    Envelope estándar para todos los reportes del CLI.
    """

    success: bool = Field(..., description="Indica si el comando fue exitoso.")
    command: str = Field(..., description="Subcomando ejecutado.")
    message: str | None = Field(None, description="Mensaje legible para humanos.")
    data: T | None = Field(None, description="Payload del reporte.")
    meta: dict[str, Any] | None = Field(
        None, description="Metadatos (grado de truncamiento, traza, etc)."
    )


class ErrorDetail(BaseModel):
    code: str
    message: str
    details: dict[str, Any] | None = None


class EngineErrorResponse(BaseModel):
    success: bool = False
    command: str | None = None
    error: ErrorDetail
