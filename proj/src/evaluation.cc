// Copyright 2026 The idner Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "idner/evaluation.h"

#include <algorithm>
#include <map>
#include <vector>

#include <fmt/format.h>

#include "idner/errors.h"

namespace idner {

namespace {

void RequireNonOverlapping(std::span<const Span> spans, const char* which) {
  std::vector<Span> sorted(spans.begin(), spans.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i - 1].Overlaps(sorted[i])) {
      throw OverlapError(std::string(which) + " spans " +
                         SpanToString(sorted[i - 1]) + " and " +
                         SpanToString(sorted[i]) + " overlap");
    }
  }
}

double Ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double Harmonic(double p, double r) {
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

bool Degenerate(const ClassCounts& c) {
  return c.tp + c.fp == 0 || c.tp + c.fn == 0;
}

std::string RowLabel(std::size_t index) {
  const SpanLabel label = SpanLabelFromIndex(index);
  return label ? std::string(CategoryTitle(*label)) : std::string("Untyped");
}

Json MetricsToJson(const Metrics& m) {
  Json out = Json::object();
  out["precision"] = m.precision;
  out["recall"] = m.recall;
  out["f1"] = m.f1;
  return out;
}

}  // namespace

MatchCounts& MatchCounts::operator+=(const MatchCounts& other) {
  for (std::size_t i = 0; i < per_label.size(); ++i) {
    per_label[i].tp += other.per_label[i].tp;
    per_label[i].fp += other.per_label[i].fp;
    per_label[i].fn += other.per_label[i].fn;
  }
  return *this;
}

MatchCounts MatchSpans(std::span<const Span> gold, std::span<const Span> pred) {
  RequireNonOverlapping(gold, "gold");
  RequireNonOverlapping(pred, "predicted");
  MatchCounts counts;
  std::vector<bool> gold_matched(gold.size(), false);
  for (const Span& p : pred) {
    auto it = std::find(gold.begin(), gold.end(), p);
    if (it == gold.end()) {
      ++counts[p.label].fp;
    } else {
      ++counts[p.label].tp;
      gold_matched[static_cast<std::size_t>(it - gold.begin())] = true;
    }
  }
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (!gold_matched[i]) ++counts[gold[i].label].fn;
  }
  return counts;
}

Metrics ComputeMetrics(const ClassCounts& counts) {
  Metrics m;
  m.precision = Ratio(counts.tp, counts.tp + counts.fp);
  m.recall = Ratio(counts.tp, counts.tp + counts.fn);
  m.f1 = Harmonic(m.precision, m.recall);
  return m;
}

EvalReport ComputeReport(const MatchCounts& counts) {
  EvalReport report;
  report.counts = counts;
  ClassCounts pooled;
  std::size_t active = 0;
  for (std::size_t i = 0; i < kNumSpanLabels; ++i) {
    const ClassCounts& c = counts.per_label[i];
    ClassReport& row = report.per_label[i];
    row.metrics = ComputeMetrics(c);
    row.support = c.tp + c.fn;
    row.predicted = c.tp + c.fp;
    pooled.tp += c.tp;
    pooled.fp += c.fp;
    pooled.fn += c.fn;
    report.total_support += row.support;
    if (c.tp + c.fp + c.fn > 0) {
      ++active;
      report.macro.precision += row.metrics.precision;
      report.macro.recall += row.metrics.recall;
      report.macro.f1 += row.metrics.f1;
    }
    const double w = static_cast<double>(row.support);
    report.weighted.precision += w * row.metrics.precision;
    report.weighted.recall += w * row.metrics.recall;
    report.weighted.f1 += w * row.metrics.f1;
  }
  report.micro = ComputeMetrics(pooled);
  if (active > 0) {
    report.macro.precision /= static_cast<double>(active);
    report.macro.recall /= static_cast<double>(active);
    report.macro.f1 /= static_cast<double>(active);
  }
  if (report.total_support > 0) {
    const double total = static_cast<double>(report.total_support);
    report.weighted.precision /= total;
    report.weighted.recall /= total;
    report.weighted.f1 /= total;
  } else {
    report.weighted = Metrics{};
  }
  return report;
}

EvalReport EvaluateCorpus(std::span<const Document> gold,
                          const Tagger& tagger) {
  MatchCounts counts;
  for (const Document& doc : gold) {
    const TokenizedText tokens = Tokenize(doc.text);
    const std::vector<Span> pred = DecodeBio(tokens, tagger.Tag(tokens));
    counts += MatchSpans(doc.spans, pred);
  }
  return ComputeReport(counts);
}

EvalReport EvaluatePredictions(std::span<const Document> gold,
                               std::span<const Document> predicted) {
  std::map<std::string, const Document*> by_id;
  for (const Document& p : predicted) {
    if (!by_id.emplace(p.id, &p).second) {
      throw ParseError("duplicate prediction id \"" + p.id + "\"");
    }
  }
  if (by_id.size() != gold.size()) {
    throw ParseError(fmt::format("{} gold documents but {} predictions",
                                 gold.size(), by_id.size()));
  }
  MatchCounts counts;
  for (const Document& g : gold) {
    auto it = by_id.find(g.id);
    if (it == by_id.end()) {
      throw ParseError("no prediction for document \"" + g.id + "\"");
    }
    if (it->second->text != g.text) {
      throw ParseError("prediction text differs for document \"" + g.id +
                       "\"");
    }
    counts += MatchSpans(g.spans, it->second->spans);
  }
  return ComputeReport(counts);
}

std::string FormatReport(const EvalReport& report) {
  constexpr int kLabelWidth = 20;
  std::string out = "Entity-level scores (exact span and label match)\n\n";
  out += fmt::format("{:<{}}{:>11}{:>9}{:>10}{:>9}\n", "", kLabelWidth,
                     "Precision", "Recall", "F1-Score", "Support");
  bool footnote = false;
  auto row = [&](const std::string& name, const Metrics& m,
                 std::size_t support, bool degenerate) {
    std::string label = name;
    if (degenerate) {
      label += " *";
      footnote = true;
    }
    out += fmt::format("{:<{}}{:>11.2f}{:>9.2f}{:>10.2f}{:>9}\n", label,
                       kLabelWidth, m.precision, m.recall, m.f1, support);
  };
  for (std::size_t i = 0; i < kNumSpanLabels; ++i) {
    const ClassCounts& c = report.counts.per_label[i];
    const bool untyped = !SpanLabelFromIndex(i).has_value();
    if (untyped && c.tp + c.fp + c.fn == 0) continue;
    row(RowLabel(i), report.per_label[i].metrics, report.per_label[i].support,
        Degenerate(c));
  }
  out += '\n';
  row("Micro Avg", report.micro, report.total_support, false);
  row("Macro Avg", report.macro, report.total_support, false);
  row("Weighted Avg", report.weighted, report.total_support, false);
  if (footnote) {
    out += "\n* precision or recall has a zero denominator and is reported "
           "as 0.\n";
  }
  return out;
}

Json ReportToJson(const EvalReport& report) {
  Json out = Json::object();
  out["matching"] = "exact";
  Json classes = Json::object();
  for (std::size_t i = 0; i < kNumSpanLabels; ++i) {
    const ClassCounts& c = report.counts.per_label[i];
    const ClassReport& r = report.per_label[i];
    Json entry = MetricsToJson(r.metrics);
    entry["support"] = r.support;
    entry["predicted"] = r.predicted;
    entry["tp"] = c.tp;
    entry["fp"] = c.fp;
    entry["fn"] = c.fn;
    const SpanLabel label = SpanLabelFromIndex(i);
    classes[label ? std::string(CategoryName(*label)) : "untyped"] = entry;
  }
  out["classes"] = classes;
  out["micro"] = MetricsToJson(report.micro);
  out["macro"] = MetricsToJson(report.macro);
  out["weighted"] = MetricsToJson(report.weighted);
  out["total_support"] = report.total_support;
  return out;
}

}  // namespace idner
