"""
PDF renderings of metrics and annotation-statistics reports
"""
from datetime import datetime

from fpdf import FPDF
from fpdf.enums import XPos, YPos

import config
from dataset.stats import SUMMARY_COLUMNS, summary_row
from .atomic import atomic_write


class ReportPDF(FPDF):
    def __init__(self, title, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.title_text = title
        self.set_auto_page_break(auto=True, margin=15)

        # Colors
        self.primary_color = (33, 150, 243)
        self.secondary_color = (25, 118, 210)
        self.body_text_color = (33, 33, 33)
        self.muted_text = (117, 117, 117)
        self.white = (255, 255, 255)
        self.default_font = "helvetica"

    def sanitize_text(self, text):
        """Core fonts are latin-1 only"""
        if text is None or text == "":
            return "n/a"
        replacements = {
            '\u201c': '"', '\u201d': '"', '\u2018': "'", '\u2019': "'",
            '\u2013': '-', '\u2014': '-', '\u2026': '...', '\u221a': 'sqrt',
        }
        text = str(text)
        for char, repl in replacements.items():
            text = text.replace(char, repl)
        return text.encode('latin-1', 'replace').decode('latin-1')

    def header(self):
        self.set_fill_color(*self.primary_color)
        self.rect(0, 0, 210, 20, 'F')
        self.set_y(5)
        self.set_font(self.default_font, 'B', 10)
        self.set_text_color(*self.white)
        self.cell(0, 10, self.sanitize_text(f'{config.TOOL_NAME.upper()} | {self.title_text.upper()}'), align='C')
        self.ln(15)

    def footer(self):
        self.set_y(-15)
        self.set_font(self.default_font, 'I', 8)
        self.set_text_color(*self.muted_text)
        self.cell(0, 10, f'Page {self.page_no()} | {config.TOOL_NAME} {config.TOOL_VERSION}', align='L')
        self.cell(0, 10, datetime.now().strftime("%Y-%m-%d %H:%M"), align='R')

    def add_section_title(self, text):
        self.set_font(self.default_font, 'B', 14)
        self.set_text_color(*self.secondary_color)
        self.cell(0, 10, self.sanitize_text(text), border='B', new_x=XPos.LMARGIN, new_y=YPos.NEXT)
        self.ln(4)

    def add_table(self, columns, rows, widths=None):
        widths = widths or [190 / len(columns)] * len(columns)
        self.set_font(self.default_font, 'B', 10)
        self.set_fill_color(245, 245, 245)
        self.set_text_color(*self.body_text_color)
        for col, w in zip(columns, widths):
            self.cell(w, 8, self.sanitize_text(col), border=1, fill=True, align='C')
        self.ln(8)
        self.set_font(self.default_font, '', 10)
        for row in rows:
            for i, (value, w) in enumerate(zip(row, widths)):
                self.cell(w, 7, self.sanitize_text(value), border=1, align='L' if i == 0 else 'R')
            self.ln(7)
        self.ln(4)

    def add_histogram(self, title, histogram, x_label):
        """Bar chart of a dataset Histogram"""
        if self.get_y() > 200:
            self.add_page()
        self.set_font(self.default_font, 'B', 11)
        self.set_text_color(*self.body_text_color)
        self.cell(0, 8, self.sanitize_text(title), new_x=XPos.LMARGIN, new_y=YPos.NEXT)

        chart_h = 50.0
        top = self.get_y()
        left = self.l_margin
        bar_w = 190.0 / max(1, len(histogram.counts))
        peak = max(histogram.counts) if histogram.counts and max(histogram.counts) > 0 else 1
        self.set_fill_color(*self.primary_color)
        for i, count in enumerate(histogram.counts):
            h = chart_h * count / peak
            if h > 0:
                self.rect(left + i * bar_w, top + chart_h - h, bar_w * 0.9, h, 'F')
        self.set_draw_color(*self.muted_text)
        self.line(left, top + chart_h, left + 190, top + chart_h)

        self.set_y(top + chart_h + 1)
        self.set_font(self.default_font, '', 7)
        self.set_text_color(*self.muted_text)
        if histogram.edges:
            lo, hi = histogram.edges[0], histogram.edges[-1]
            self.cell(95, 5, f'{x_label}: {lo:.1f}', align='L')
            self.cell(95, 5, f'{hi:.1f}', align='R', new_x=XPos.LMARGIN, new_y=YPos.NEXT)
        self.ln(6)


def _percent(value):
    return "n/a" if value is None else f"{value * 100:.2f}"


def generate_metrics_pdf(report, output_path, title="Evaluation report"):
    """Per-class and aggregate metrics table in percent plus the HOTA components"""
    pdf = ReportPDF(title)
    pdf.add_page()
    pdf.add_section_title(title)

    columns = ["Class", "sMOTSA", "MOTSA", "HOTA", "IDS", "TP", "FP", "FN"]
    rows = []
    for c in (*report.classes, report.aggregate):
        m = c.metrics
        rows.append([c.name, _percent(m.smotsa), _percent(m.motsa), _percent(c.hota.hota),
                     str(m.ids), str(m.tp), str(m.fp), str(m.fn)])
    pdf.add_table(columns, rows, [36, 22, 22, 22, 22, 22, 22, 22])

    pdf.add_section_title("HOTA components")
    rows = [
        [c.name, _percent(c.hota.hota), _percent(c.hota.det_a_mean),
         _percent(c.hota.ass_a_mean), _percent(c.hota.loc_a_mean)]
        for c in (*report.classes, report.aggregate)
    ]
    pdf.add_table(["Class", "HOTA", "DetA", "AssA", "LocA"], rows)

    if report.sequences:
        pdf.set_font(pdf.default_font, 'I', 9)
        pdf.set_text_color(*pdf.muted_text)
        pdf.multi_cell(0, 5, pdf.sanitize_text("Sequences: " + ", ".join(report.sequences)))

    atomic_write(output_path, pdf.output)
    return output_path


def generate_stats_pdf(rows, output_path, title="Annotation statistics"):
    """rows: (dataset name, StatsReport) pairs"""
    pdf = ReportPDF(title)
    pdf.add_page()
    pdf.add_section_title(title)
    pdf.add_table(list(SUMMARY_COLUMNS), [summary_row(name, report) for name, report in rows],
                  [50, 24, 28, 30, 30, 28])

    for name, report in rows:
        pdf.add_section_title(f"{name}: distributions")
        pdf.add_histogram("Instance size", report.size_histogram, "sqrt(w*h) px")
        pdf.add_histogram("Track length", report.track_length_histogram, "frames")

    atomic_write(output_path, pdf.output)
    return output_path
