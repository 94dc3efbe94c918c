import math


def binomial_sigma(p, n):
    return math.sqrt(max(p * (1.0 - p), 0.0) / n)


def ks_critical_1pct(n):
    # asymptotic one-sample Kolmogorov-Smirnov critical value at alpha = 0.01
    return 1.628 / math.sqrt(n)


# acceptance outcomes, echoed by the terminal-summary hook in conftest
ACCEPTANCE_LINES: list[str] = []


def record_criterion(number, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
