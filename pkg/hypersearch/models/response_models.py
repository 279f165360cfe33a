import json
from typing import Any

from pydantic import BaseModel


class ResultEnvelope(BaseModel):
    status: str = "SUCCESS"
    errorCode: int | str = ""
    data: Any = None

    @classmethod
    def wrap(cls, content: Any) -> "ResultEnvelope":
        if isinstance(content, dict) and "status" in content and "data" in content:
            return cls(**content)
        return cls(status="SUCCESS", errorCode="", data=content)

    def render(self) -> str:
        return json.dumps(self.model_dump(mode="json"), indent=2, ensure_ascii=False)
