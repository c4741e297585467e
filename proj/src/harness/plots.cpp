#include "hbea/harness/plots.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "hbea/errors.hpp"
#include "hbea/harness/csv.hpp"
#include "hbea/rk.hpp"

namespace hbea::harness {

namespace {

namespace fs = std::filesystem;

const char* kPrelude = R"PY(import csv
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

HERE = os.path.dirname(os.path.abspath(__file__))
CSV = os.path.join(HERE, "@CSV@")
PNG = os.path.join(HERE, "@PNG@")


def num(r, k):
    try:
        return float(r[k])
    except (KeyError, ValueError):
        return float("nan")


with open(CSV, newline="") as f:
    rows = [r for r in csv.DictReader(f) if r.get("status", "ok") in ("ok", "floor")]


def guide(ax, xs, ys, slope, style, label):
    pts = [(x, y) for x, y in zip(xs, ys) if x > 0 and y > 0]
    if not pts or slope <= 0:
        return
    x0, y0 = min(pts)
    ax.loglog(xs, [y0 * (x / x0) ** slope for x in xs], style, lw=1, label=label)


def by(key):
    out = {}
    for r in rows:
        out.setdefault(num(r, key), []).append(r)
    return out

)PY";

const char* kDrift = R"PY(P = @P@
N = @N@
fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4.5))
groups = by("h")
for h in sorted(groups, reverse=True):
    rs = groups[h]
    t = [num(r, "t") for r in rs]
    ax1.semilogy(t, [max(num(r, "H_drift"), 1e-300) for r in rs], label="H, h=%g" % h)
    ax1.semilogy(t, [max(num(r, "H_tilde_drift"), 1e-300) for r in rs], "--", label="H~, h=%g" % h)
ax1.set_xlabel("t")
ax1.set_ylabel("drift")
ax1.legend(fontsize=6)
hs = sorted(groups)
dH = [max(num(r, "H_drift") for r in groups[h]) for h in hs]
dT = [max(num(r, "H_tilde_drift") for r in groups[h]) for h in hs]
ax2.loglog(hs, dH, "o-", label="max |H - H(0)|")
ax2.loglog(hs, dT, "s-", label="max |H~ - H~(0)|")
guide(ax2, hs, dH, P, "k:", "slope %d" % P)
guide(ax2, hs, dT, N + 1, "k-.", "slope %d" % (N + 1))
ax2.set_xlabel("h")
ax2.legend(fontsize=7)
fig.tight_layout()
fig.savefig(PNG, dpi=150)
)PY";

const char* kDriftSummary = R"PY(P = @P@
N = @N@
fig, ax = plt.subplots(figsize=(6, 4.5))
hs = [num(r, "h") for r in rows]
dH = [num(r, "max_H_drift") for r in rows]
dT = [num(r, "max_H_tilde_drift") for r in rows]
ax.loglog(hs, dH, "o-", label="max |H - H(0)|")
ax.loglog(hs, dT, "s-", label="max |H~ - H~(0)|")
guide(ax, hs, dH, P, "k:", "slope %d" % P)
guide(ax, hs, dT, N + 1, "k-.", "slope %d" % (N + 1))
ax.set_xlabel("h")
ax.legend(fontsize=7)
fig.tight_layout()
fig.savefig(PNG, dpi=150)
)PY";

const char* kConverge = R"PY(P = @P@
fig, ax = plt.subplots(figsize=(6, 4.5))
hs = [num(r, "h") for r in rows]
err = [num(r, "error") for r in rows]
ax.loglog(hs, err, "o-", label="global error at T")
guide(ax, hs, err, P, "k:", "slope %d" % P)
ax.set_xlabel("h")
ax.legend()
fig.tight_layout()
fig.savefig(PNG, dpi=150)
)PY";

const char* kProjscan = R"PY(fig, ax = plt.subplots(figsize=(6, 4.5))
pts = [(num(r, "m_root"), num(r, "error_Y1"), num(r, "bound_shape")) for r in rows]
pts = [p for p in pts if p[1] > 0]
if pts:
    x, e, b = zip(*pts)
    ax.semilogy(x, e, "o-", label="|Psi - Psi_m| in Y1")
    scale = e[0] / b[0] if b[0] > 0 else 1.0
    ax.semilogy(x, [scale * v for v in b], "k:", label="bound shape")
ax.set_xlabel("m^(1/q)")
ax.legend()
fig.tight_layout()
fig.savefig(PNG, dpi=150)
)PY";

const char* kEmbedding = R"PY(fig, ax = plt.subplots(figsize=(6, 4.5))
groups = by("n")
for n in sorted(groups):
    rs = groups[n]
    hs = [num(r, "h") for r in rs]
    err = [num(r, "error") for r in rs]
    ax.loglog(hs, err, "o-", label="n=%d" % n)
    ax.loglog(hs, [num(r, "noise_floor") for r in rs], ":", color="gray", lw=0.8)
    guide(ax, hs, err, n + 1, "k-.", "slope %d" % (n + 1))
ax.set_xlabel("h")
ax.set_ylabel("|Psi^h - modified flow|")
ax.legend(fontsize=7)
fig.tight_layout()
fig.savefig(PNG, dpi=150)
)PY";

const char* kCloseness = R"PY(P = @P@
fig, ax = plt.subplots(figsize=(6, 4.5))
hs = [num(r, "h") for r in rows]
d = [num(r, "diff") for r in rows]
ax.loglog(hs, d, "o-", label="|H~ - H|")
guide(ax, hs, d, P, "k:", "slope %d" % P)
ax.set_xlabel("h")
ax.legend()
fig.tight_layout()
fig.savefig(PNG, dpi=150)
)PY";

const char* kGradient = R"PY(fig, ax = plt.subplots(figsize=(6, 4.5))
groups = by("n")
for n in sorted(groups):
    rs = groups[n]
    ax.semilogy([num(r, "h") for r in rs], [max(num(r, "residual"), 1e-300) for r in rs], "o-",
                label="n=%d" % n)
ax.axhline(1e-5, color="k", ls=":", lw=1)
ax.set_xscale("log")
ax.set_xlabel("h")
ax.set_ylabel("gradient residual")
ax.legend(fontsize=7)
fig.tight_layout()
fig.savefig(PNG, dpi=150)
)PY";

const char* kExpFit = R"PY(fig, ax = plt.subplots(figsize=(6, 4.5))
x = np.array([num(r, "x") for r in rows])
dt = np.array([num(r, "H_tilde_drift") for r in rows])
dh = np.array([num(r, "H_drift") for r in rows])
inr = np.array([num(r, "in_range") > 0 for r in rows], dtype=bool)
ax.semilogy(x, dh, "o-", label="per-step H drift")
ax.semilogy(x, dt, "s-", label="per-step H~ drift")
sel = inr & (dt > 0)
if sel.sum() >= 2:
    k, c = np.polyfit(x[sel], np.log(dt[sel]), 1)
    ax.semilogy(x[sel], np.exp(c + k * x[sel]), "k:", label="fit slope %.3g" % k)
ax.set_xlabel("h^(-1/(1+q))")
ax.legend(fontsize=7)
fig.tight_layout()
fig.savefig(PNG, dpi=150)
)PY";

const char* kIntegrate = R"PY(fig, ax = plt.subplots(figsize=(6, 4.5))
groups = by("h")
H0 = {h: num(rs[0], "H") for h, rs in groups.items()}
for h in sorted(groups, reverse=True):
    rs = groups[h]
    ax.plot([num(r, "t") for r in rs], [num(r, "H") - H0[h] for r in rs], label="h=%g" % h)
ax.set_xlabel("t")
ax.set_ylabel("H - H(0)")
ax.legend(fontsize=7)
fig.tight_layout()
fig.savefig(PNG, dpi=150)
)PY";

const char* kGeneric = R"PY(fig, ax = plt.subplots(figsize=(6, 4.5))
if rows:
    keys = list(rows[0].keys())
    xs = [num(r, keys[0]) for r in rows]
    for k in keys[1:]:
        ys = [num(r, k) for r in rows]
        if all(v == v for v in ys):
            ax.plot(xs, ys, ".-", label=k)
    ax.set_xlabel(keys[0])
    ax.legend(fontsize=6)
fig.savefig(PNG, dpi=150)
)PY";

void replace_all(std::string& s, const std::string& from, const std::string& to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
}

int column(const CsvTable& t, const std::string& name) {
  const auto& h = t.header();
  const auto it = std::find(h.begin(), h.end(), name);
  return it == h.end() ? -1 : static_cast<int>(it - h.begin());
}

std::string first_value(const CsvTable& t, const std::string& name) {
  const int c = column(t, name);
  if (c < 0 || t.rows().empty()) return "";
  return t.rows().front()[c];
}

int method_order(const CsvTable& t) {
  const std::string id = first_value(t, "tableau");
  if (id.empty()) return 0;
  try {
    return tableau_by_id(id).order;
  } catch (const Error&) {
    return 0;
  }
}

int first_int(const CsvTable& t, const std::string& name) {
  const std::string v = first_value(t, name);
  try {
    return v.empty() ? 0 : std::stoi(v);
  } catch (const std::exception&) {
    return 0;
  }
}

}  // namespace

std::string plot_script(const std::string& csv_path, const std::string& csv_rel) {
  if (!fs::exists(csv_path)) throw IoError("plots: CSV not found: " + csv_path);
  const CsvTable table = read_csv(csv_path);
  const std::string stem = fs::path(csv_path).stem().string();
  const std::string file = fs::path(csv_path).filename().string();

  std::string out = "# Plot for " + file + "; run with python3.\n";
  if (table.size() == 0) {
    out += "# warning: " + file + " has no data rows; nothing to plot.\n";
    out += "print(\"warning: " + file + " has no data rows\")\n";
    return out;
  }

  std::string body;
  if (stem == "drift") {
    body = kDrift;
  } else if (stem == "drift_summary") {
    body = kDriftSummary;
  } else if (stem == "converge") {
    body = kConverge;
  } else if (stem == "projscan") {
    body = kProjscan;
  } else if (stem == "bea_embedding") {
    body = kEmbedding;
  } else if (stem == "bea_closeness") {
    body = kCloseness;
  } else if (stem == "bea_gradient") {
    body = kGradient;
  } else if (stem == "bea_expfit") {
    body = kExpFit;
  } else if (stem == "integrate") {
    body = kIntegrate;
  } else {
    body = kGeneric;
  }
  int n = first_int(table, "n_used");
  if (n == 0) n = first_int(table, "n");

  out += kPrelude;
  out += body;
  replace_all(out, "@CSV@", csv_rel);
  replace_all(out, "@PNG@", stem + ".png");
  replace_all(out, "@P@", std::to_string(method_order(table)));
  replace_all(out, "@N@", std::to_string(n));
  return out;
}

std::vector<std::string> emit_plots(const std::vector<std::string>& csv_paths,
                                    const std::string& out_dir) {
  for (const auto& p : csv_paths) {
    if (!fs::exists(p)) throw IoError("plots: CSV not found: " + p);
  }
  std::vector<std::string> scripts;
  for (const auto& p : csv_paths) {
    const fs::path csv(p);
    const fs::path dir = out_dir.empty() ? csv.parent_path() : fs::path(out_dir);
    if (!dir.empty()) {
      std::error_code ec;
      fs::create_directories(dir, ec);
      if (ec) throw IoError("plots: cannot create '" + dir.string() + "': " + ec.message());
    }
    const fs::path script = dir / ("plot_" + csv.stem().string() + ".py");
    const std::string rel = fs::relative(fs::absolute(csv), fs::absolute(dir.empty() ? "." : dir))
                                .generic_string();
    const std::string text = plot_script(p, rel);
    std::ofstream f(script, std::ios::binary);
    if (!f) throw IoError("plots: cannot write " + script.string());
    f << text;
    if (!f) throw IoError("plots: cannot write " + script.string());
    scripts.push_back(script.string());
  }
  return scripts;
}

}  // namespace hbea::harness
