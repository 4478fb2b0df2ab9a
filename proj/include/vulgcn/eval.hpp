#pragma once

// Confusion counting (vulnerable = positive class) and accuracy, precision,
// recall, F1.

#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "text_io.hpp"

namespace vulgcn {

struct ConfusionMatrix {
  std::size_t tp = 0, tn = 0, fp = 0, fn = 0;

  std::size_t total() const { return tp + tn + fp + fn; }
  friend bool operator==(const ConfusionMatrix &, const ConfusionMatrix &) = default;
};

struct EvalReport {
  ConfusionMatrix confusion;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::vector<std::string> warnings;
};

inline ConfusionMatrix confusion(const std::vector<int> &preds,
                                 const std::vector<int> &truth) {
  if (preds.size() != truth.size())
    throw data_error("confusion: " + std::to_string(preds.size()) +
                     " predictions vs " + std::to_string(truth.size()) + " labels");
  ConfusionMatrix c;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const int p = preds[i], t = truth[i];
    if ((p != 0 && p != 1) || (t != 0 && t != 1))
      throw data_error("confusion: labels must be 0 or 1");
    if (p == 1)
      ++(t == 1 ? c.tp : c.fp);
    else
      ++(t == 1 ? c.fn : c.tn);
  }
  return c;
}

/// Zero denominators yield 0 and a warning.
inline EvalReport metrics(const ConfusionMatrix &c) {
  if (c.total() == 0)
    throw data_error("metrics: empty confusion matrix");
  EvalReport r;
  r.confusion = c;
  const auto d = [](std::size_t v) { return static_cast<double>(v); };

  r.accuracy = d(c.tp + c.tn) / d(c.tp + c.tn + c.fp + c.fn);
  if (c.tp + c.fp > 0)
    r.precision = d(c.tp) / d(c.tp + c.fp);
  else
    r.warnings.push_back("precision undefined (no positive predictions); reported as 0");
  if (c.tp + c.fn > 0)
    r.recall = d(c.tp) / d(c.tp + c.fn);
  else
    r.warnings.push_back("recall undefined (no positive samples); reported as 0");
  if (r.recall + r.precision > 0.0)
    r.f1 = 2.0 * (r.recall * r.precision / (r.recall + r.precision));
  else
    r.warnings.push_back("F1 undefined (precision + recall = 0); reported as 0");
  return r;
}

inline EvalReport evaluate(const std::vector<int> &preds, const std::vector<int> &truth) {
  return metrics(confusion(preds, truth));
}

/// Aligned table, percentages with one decimal.
inline std::string format_report_table(
    const std::vector<std::pair<std::string, EvalReport>> &rows) {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-16s %12s %13s %10s %12s\n", "Model",
                "Accuracy(%)", "Precision(%)", "Recall(%)", "F1-score(%)");
  out += buf;
  for (const auto &[name, r] : rows) {
    std::snprintf(buf, sizeof(buf), "%-16s %12.1f %13.1f %10.1f %12.1f\n",
                  name.c_str(), 100.0 * r.accuracy, 100.0 * r.precision,
                  100.0 * r.recall, 100.0 * r.f1);
    out += buf;
  }
  return out;
}

/// Machine-readable block; `prefix` namespaces the keys (e.g. "gcn.").
inline std::string format_report_kv(const EvalReport &r, const std::string &prefix = "") {
  std::string out;
  auto kv = [&](const char *k, const std::string &v) { out += prefix + k + "=" + v + "\n"; };
  kv("tp", std::to_string(r.confusion.tp));
  kv("tn", std::to_string(r.confusion.tn));
  kv("fp", std::to_string(r.confusion.fp));
  kv("fn", std::to_string(r.confusion.fn));
  kv("accuracy", io::format_double(r.accuracy));
  kv("precision", io::format_double(r.precision));
  kv("recall", io::format_double(r.recall));
  kv("f1", io::format_double(r.f1));
  for (const auto &w : r.warnings)
    kv("warning", w);
  return out;
}

} // namespace vulgcn
