# -*- coding: utf-8 -*-
"""
Created the 17/10/2026

Line chart of the smoothed daily CO2 series of every scenario, with the peak of each one annotated.
"""
from pathlib import Path
from typing import Sequence, Union

import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt  # noqa: E402

from transit_modeshift.models.emissions import DailySeries  # noqa: E402
from transit_modeshift.utils import seconds_to_clock  # noqa: E402


def plot_series(series: Sequence[DailySeries], labels: Sequence[str], file: Union[str, Path],
                title: str = 'Daily CO2 emissions'):
    """ Write an SVG chart. Output bytes only depend on the series (fixed hash salt, no date metadata)"""
    with plt.rc_context({'svg.hashsalt': 'transit_modeshift', 'svg.fonttype': 'none'}):
        fig, ax = plt.subplots(figsize=(10, 5))
        for label, item in zip(labels, series):
            hours = item.bin_starts / 3600.
            line, = ax.plot(hours, item.smoothed / 1000., label=label, linewidth=1.2)
            ax.annotate(f'{label} peak {seconds_to_clock(item.peak_time)}',
                        xy=(item.peak_time / 3600., item.peak_value / 1000.),
                        xytext=(0, 8), textcoords='offset points', ha='center', fontsize=8,
                        color=line.get_color())
            ax.plot([item.peak_time / 3600.], [item.peak_value / 1000.], marker='o', color=line.get_color())
        ax.set_xlabel('Time of day (hours)')
        ax.set_ylabel('CO2 emissions (kg per bin)')
        ax.set_title(title)
        ax.grid(True, alpha=0.3)
        ax.legend()
        fig.tight_layout()
        fig.savefig(file, format='svg', metadata={'Date': None})
        plt.close(fig)
