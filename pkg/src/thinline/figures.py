"""Chart rendering for evaluation reports.

Charts land next to the delimited report as PNG files: a detection-rate
bar chart always, and a mean-time chart when the report carries timings.
"""

from collections import OrderedDict


def render_report_figures(report, out_base) -> list:
    """Render charts for an EvalReport.

    Args:
        report: EvalReport to plot.
        out_base: path prefix; files are <out_base>_rates.png and,
            when any row has a mean time, <out_base>_times.png.

    Returns:
        List of file paths written.
    """
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out_base = str(out_base)
    rows = sorted(report.rows, key=lambda r: (r.config, r.corpus))
    if not rows:
        return []

    corpora = list(OrderedDict.fromkeys(r.corpus for r in rows))
    configs = list(OrderedDict.fromkeys(r.config for r in rows))
    written = []

    fig, ax = plt.subplots(figsize=(1.8 + 1.6 * len(corpora), 4.0))
    width = 0.8 / len(configs)
    for ci, cfg in enumerate(configs):
        xs, ys = [], []
        for gi, corpus in enumerate(corpora):
            row = next((r for r in rows
                        if r.config == cfg and r.corpus == corpus), None)
            if row is not None:
                xs.append(gi + ci * width)
                ys.append(row.rate_pct)
        ax.bar(xs, ys, width=width * 0.92, label=cfg)
    ax.set_xticks([g + 0.4 - width / 2 for g in range(len(corpora))])
    ax.set_xticklabels(corpora)
    ax.set_ylabel("detection rate (%)")
    ax.set_ylim(0, 105)
    ax.legend(fontsize=8)
    ax.spines["top"].set_visible(False)
    ax.spines["right"].set_visible(False)
    fig.tight_layout()
    rates_path = f"{out_base}_rates.png"
    fig.savefig(rates_path, dpi=110)
    plt.close(fig)
    written.append(rates_path)

    timed = [r for r in rows if r.mean_time_s is not None]
    if timed:
        fig, ax = plt.subplots(figsize=(2.0 + 0.9 * len(timed), 4.0))
        labels = [f"{r.config}\n{r.corpus}" for r in timed]
        ax.bar(range(len(timed)), [r.mean_time_s for r in timed],
               color="#5577aa")
        ax.set_xticks(range(len(timed)))
        ax.set_xticklabels(labels, fontsize=8)
        ax.set_ylabel("mean time per image (s)")
        ax.spines["top"].set_visible(False)
        ax.spines["right"].set_visible(False)
        fig.tight_layout()
        times_path = f"{out_base}_times.png"
        fig.savefig(times_path, dpi=110)
        plt.close(fig)
        written.append(times_path)
    return written
