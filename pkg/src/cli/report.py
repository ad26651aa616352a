"""
src/cli/report.py
──────────────────
Mise en forme des résultats d'un planning.

  - schedule_document : contenu de schedule.json
  - compute_metrics   : indicateurs (pandas) pour metrics.json
  - gantt_svg         : diagramme SVG, une ligne par ressource ; les
                        moustaches montrent les supports flous du début
                        et de la fin de chaque activité
  - gantt_txt         : même diagramme en texte brut
"""

from html import escape

import pandas as pd

from src.cli.schemas import AllocationOut, MetricsOut, ScheduleOut
from src.fuzzy.core import defuzzify
from src.model.shop import Instance, Schedule

PALETTE = ["#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
           "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"]


# ────────────────────────────────────────────────────────────────
# schedule.json / metrics.json
# ────────────────────────────────────────────────────────────────

def schedule_document(instance: Instance, schedule: Schedule, verbose: bool = False) -> ScheduleOut:
    allocations = [
        AllocationOut(
            activity_id=a.activity_id,
            job_id=instance.activity(a.activity_id).job_id,
            resource_id=a.resource_id,
            crisp_start=a.crisp_start,
            crisp_finish=a.crisp_finish,
            fuzzy_start=a.fuzzy_start.to_json(),
            fuzzy_finish=a.fuzzy_finish.to_json(),
        )
        for a in schedule.allocations
    ]
    return ScheduleOut(
        makespan=schedule.makespan,
        allocations=allocations,
        iteration_log=schedule.iteration_log if verbose else None,
    )


def allocations_frame(instance: Instance, schedule: Schedule) -> pd.DataFrame:
    """Une ligne par allocation, avec la tâche et la durée nette."""
    df = pd.DataFrame(
        schedule.to_records(),
        columns=["activity_id", "resource_id", "crisp_start", "crisp_finish"],
    )
    df["job_id"] = [instance.activity(aid).job_id for aid in df["activity_id"]]
    df["busy"] = df["crisp_finish"] - df["crisp_start"]
    return df


def compute_metrics(
    instance: Instance,
    schedule: Schedule,
    optimality_ratio: float | None = None,
) -> MetricsOut:
    """
    Indicateurs du planning.
    Le retard d'une tâche est la fin de sa dernière activité moins son
    échéance défuzzifiée (négatif = en avance).
    """
    method = instance.config.defuzzification
    df = allocations_frame(instance, schedule)
    makespan = schedule.makespan

    finishes = df.groupby("job_id")["crisp_finish"].max()
    job_lateness = {
        job.id: float(finishes[job.id] - defuzzify(job.due_date, method))
        for job in sorted(instance.jobs, key=lambda j: j.id)
        if job.id in finishes.index
    }

    busy = df.groupby("resource_id")["busy"].sum()
    utilization = {
        r.id: float(busy.get(r.id, 0.0) / makespan) if makespan > 0 else 0.0
        for r in sorted(instance.resources, key=lambda r: r.id)
    }

    iterations = [rec for rec in schedule.iteration_log if rec.get("kind") == "iteration"]
    fixpoint = [rec["recommendations"] for rec in iterations if rec.get("recommendations")]
    return MetricsOut(
        makespan=makespan,
        max_lateness=max(job_lateness.values(), default=0.0),
        job_lateness=job_lateness,
        resource_utilization=utilization,
        outer_iterations=len(iterations),
        fixpoint_iterations=[r["iteration_count"] for r in fixpoint],
        converged=[r["converged"] for r in fixpoint],
        optimality_ratio=optimality_ratio,
    )


# ────────────────────────────────────────────────────────────────
# Gantt SVG
# ────────────────────────────────────────────────────────────────

class SvgBuilder:
    """Construction incrémentale d'un document SVG."""

    def __init__(self, width: int, height: int):
        self.width = width
        self.height = height
        self.parts: list[str] = []

    def rectangle(self, x1, y1, x2, y2, fill, title="") -> None:
        self.parts.append(
            f'<rect x="{x1:.1f}" y="{y1:.1f}" width="{max(x2 - x1, 0.5):.1f}" '
            f'height="{y2 - y1:.1f}" fill="{fill}" stroke="#333" stroke-width="0.5">'
            f"<title>{escape(title)}</title></rect>"
        )

    def line(self, x1, y1, x2, y2, stroke="#222", width=1.0) -> None:
        self.parts.append(
            f'<line x1="{x1:.1f}" y1="{y1:.1f}" x2="{x2:.1f}" y2="{y2:.1f}" '
            f'stroke="{stroke}" stroke-width="{width}"/>'
        )

    def text(self, x, y, content, size=11, anchor="start") -> None:
        self.parts.append(
            f'<text x="{x:.1f}" y="{y:.1f}" font-family="sans-serif" font-size="{size}" '
            f'text-anchor="{anchor}">{escape(content)}</text>'
        )

    def get_svg(self) -> str:
        header = (
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{self.width}" height="{self.height}" '
            f'viewBox="0 0 {self.width} {self.height}">'
        )
        return "\n".join([header, *self.parts, "</svg>"]) + "\n"


def _whisker(svg: SvgBuilder, lo: float, hi: float, y: float, scale, x0: float) -> None:
    if hi <= lo:
        return
    xa, xb = x0 + lo * scale, x0 + hi * scale
    svg.line(xa, y, xb, y)
    svg.line(xa, y - 3, xa, y + 3)
    svg.line(xb, y - 3, xb, y + 3)


def gantt_svg(instance: Instance, schedule: Schedule, width: int = 900, row: int = 36) -> str:
    """Une ligne par ressource ; rectangles aux temps nets, moustaches aux supports flous."""
    resources = sorted(r.id for r in instance.resources)
    left, top = 70, 30
    horizon = max(
        [a.fuzzy_finish.b for a in schedule.allocations] + [schedule.makespan, 1.0]
    )
    scale = (width - left - 20) / horizon
    svg = SvgBuilder(width, top + row * len(resources) + 30)

    jobs = sorted(j.id for j in instance.jobs)
    colors = {job_id: PALETTE[i % len(PALETTE)] for i, job_id in enumerate(jobs)}

    for index, rid in enumerate(resources):
        y = top + index * row
        svg.text(10, y + row / 2 + 4, rid)
        svg.line(left, y + row, width - 20, y + row, stroke="#ccc", width=0.5)

    row_of = {rid: i for i, rid in enumerate(resources)}
    for a in schedule.allocations:
        if a.resource_id not in row_of:
            continue
        y = top + row_of[a.resource_id] * row
        job_id = instance.activity(a.activity_id).job_id
        svg.rectangle(
            left + a.crisp_start * scale, y + 8,
            left + a.crisp_finish * scale, y + row - 8,
            colors.get(job_id, "#999"),
            title=f"{a.activity_id} [{a.crisp_start:g}, {a.crisp_finish:g})",
        )
        _whisker(svg, a.fuzzy_start.a, a.fuzzy_start.b, y + 6, scale, left)
        _whisker(svg, a.fuzzy_finish.a, a.fuzzy_finish.b, y + row - 6, scale, left)
        svg.text(left + (a.crisp_start + a.crisp_finish) / 2 * scale, y + row / 2 + 4,
                 a.activity_id, size=9, anchor="middle")

    # Axe du temps
    axis_y = top + row * len(resources) + 12
    ticks = 10
    for k in range(ticks + 1):
        t = horizon * k / ticks
        svg.text(left + t * scale, axis_y, f"{t:.3g}", size=9, anchor="middle")
    return svg.get_svg()


# ────────────────────────────────────────────────────────────────
# Gantt texte
# ────────────────────────────────────────────────────────────────

def gantt_txt(instance: Instance, schedule: Schedule, width: int = 60) -> str:
    """Barres de `width` caractères ; chaque activité est suivie de ses temps nets."""
    makespan = schedule.makespan or 1.0
    scale = width / makespan
    lines = [f"makespan = {schedule.makespan:g}"]
    for rid in sorted(r.id for r in instance.resources):
        bar = ["."] * width
        labels = []
        for a in schedule.allocations:
            if a.resource_id != rid:
                continue
            lo = min(int(a.crisp_start * scale), width - 1)
            hi = max(min(int(round(a.crisp_finish * scale)), width), lo + 1)
            for i in range(lo, hi):
                bar[i] = "#"
            labels.append(f"{a.activity_id}[{a.crisp_start:g},{a.crisp_finish:g})")
        lines.append(f"{rid:<6}|{''.join(bar)}| {' '.join(labels)}")
    return "\n".join(lines) + "\n"
