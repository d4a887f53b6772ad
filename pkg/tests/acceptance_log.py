"""Shared record of acceptance outcomes, printed at the end of the run."""

RESULTS: dict = {}


def record(key, status: str, detail: str) -> None:
    RESULTS[key] = (status, detail)
    print(f"criterion {key}: {status} - {detail}")
