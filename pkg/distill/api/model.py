from dataclasses import dataclass
from typing import List, Optional


@dataclass
class Result:
    """
    Outcome of a single named check
    """

    ok: bool
    name: str
    message: Optional[str] = None
    color: str = "white"

    @classmethod
    def Ok(cls, name: str, message: Optional[str] = None):
        return cls(True, name, message, "green")

    @classmethod
    def Warn(cls, name: str, message: Optional[str] = None):
        return cls(True, name, message, "yellow")

    @classmethod
    def Err(cls, name: str, message: str):
        return cls(False, name, message, "red")

    def is_ok(self) -> bool:
        return self.ok

    def is_err(self) -> bool:
        return not self.ok

    def is_warn(self) -> bool:
        return self.ok and self.color == "yellow"

    def text(self) -> str:
        def colored(a, b):
            return f"[{b}]{a}[/{b}]"

        label = "fail" if not self.ok else "warn" if self.is_warn() else "pass"
        status = colored(label, self.color)
        if self.message:
            return f"{self.name}: {status} ({self.message})"

        return f"{self.name}: {status}"

    def to_data(self) -> dict:
        data = {"check": self.name, "ok": self.ok}
        if self.is_warn():
            data["warning"] = True
        if self.message:
            data["message"] = self.message

        return data


Ok = Result.Ok
Err = Result.Err
Warn = Result.Warn


def all_ok(results: List[Result]) -> bool:
    return all(r.is_ok() for r in results)


class DistillError(Exception):
    """
    Base error, carries the exit code the command line reports
    """

    exit_code = 1


class DocumentError(DistillError):
    """
    Raised when an instance document cannot be parsed
    """

    exit_code = 2

    def __init__(self, message: str, field: Optional[str] = None) -> None:
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)


class InvariantError(DistillError):
    """
    Raised when an input or an intermediate object violates an invariant
    """

    exit_code = 3


class HomogeneityError(DistillError):
    """
    Raised when an embedding is asked for with non-homogeneous targets
    """

    exit_code = 4

    def __init__(self, offenders: List[str]) -> None:
        self.offenders = offenders
        super().__init__("non-homogeneous atoms: " + "; ".join(offenders))


class DecayError(DistillError):
    """
    Raised when no decay certificate exists below the search cap
    """

    exit_code = 5
