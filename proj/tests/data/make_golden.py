"""Builds the frozen golden-statistics corpus: 40 samples + reference values
from scipy/statsmodels (independent implementations of AS R94, the classical
Lilliefors statistic, Anderson-Darling with the Stephens modified-statistic
p-value) plus Monte Carlo Lilliefors p-values."""
import json
import numpy as np
from scipy import stats
from statsmodels.stats.diagnostic import normal_ad
from statsmodels.stats._lilliefors import ksstat

SEED = 20240611
LF_REF_SIMS = 200000

rng = np.random.default_rng(SEED)
sizes = [5,7,8,10,12,15,18,20,25,30,35,40,45,50,60,70,80,90,95,100]

# Precompute LF null tables per size (classical two-sided D, estimated params).
def lf_stat(x):
    return ksstat(x, 'norm', alternative='two_sided')  # standardizes internally? no:
# statsmodels lilliefors: it standardizes first. Use explicit:
def lf_stat2(x):
    z = (x - x.mean()) / x.std(ddof=1)
    zs = np.sort(z)
    n = len(z)
    cdf = stats.norm.cdf(zs)
    dplus = (np.arange(1, n+1)/n - cdf).max()
    dminus = (cdf - np.arange(0, n)/n).max()
    return max(dplus, dminus)

null_tables = {}
nrng = np.random.default_rng(999)
for n in sizes:
    sims = nrng.normal(size=(LF_REF_SIMS, n))
    m = sims.mean(axis=1, keepdims=True)
    s = sims.std(axis=1, ddof=1, keepdims=True)
    z = np.sort((sims - m)/s, axis=1)
    cdf = stats.norm.cdf(z)
    i = np.arange(1, n+1)
    dplus = (i/n - cdf).max(axis=1)
    dminus = (cdf - (i-1)/n).max(axis=1)
    null_tables[n] = np.sort(np.maximum(dplus, dminus))
    print("lf table", n, "done")

def ajb(x):
    n = len(x)
    d = x - x.mean()
    m2 = (d**2).mean(); m3 = (d**3).mean(); m4 = (d**4).mean()
    sk = m3/m2**1.5; ku = m4/m2**2
    c1 = 6*(n-2)/((n+1)*(n+3)); c2 = 3*(n-1)/(n+1)
    c3 = 24*n*(n-2)*(n-3)/((n+1)**2*(n+3)*(n+5))
    J = sk**2/c1 + (ku-c2)**2/c3
    return J, float(stats.chi2.sf(J, 2))

def jb(x):
    n = len(x)
    d = x - x.mean()
    m2 = (d**2).mean(); m3 = (d**3).mean(); m4 = (d**4).mean()
    sk = m3/m2**1.5; ku = m4/m2**2
    J = n*(sk**2/6 + (ku-3)**2/24)
    return J, float(stats.chi2.sf(J, 2))

def cvm(x):
    z = np.sort((x - x.mean())/x.std(ddof=1))
    n = len(z)
    u = stats.norm.cdf(z)
    i = np.arange(1, n+1)
    return float(((u - (2*i-1)/(2*n))**2).sum() + 1/(12*n))

records = []
for k, n in enumerate(sizes):
    for fam in ("normal", "exponential"):
        if fam == "normal":
            x = rng.normal(loc=rng.uniform(-50,50), scale=rng.uniform(0.5,10), size=n)
        else:
            x = rng.exponential(scale=rng.uniform(0.5,5), size=n)
        x = np.round(x, 12)
        W, pW = stats.shapiro(x)
        D = lf_stat2(x)
        tab = null_tables[n]
        count_ge = int((tab >= D - 1e-15).sum())
        pD = (1 + count_ge) / (1 + LF_REF_SIMS)
        A, pA = normal_ad(x)
        J, pJ = jb(x) if n >= 7 else (None, None)
        Ja, pJa = ajb(x) if n >= 7 else (None, None)
        rec = {
            "n": n, "family": fam,
            "values": [float(v) for v in x],
            "sw_w": float(W), "sw_p": float(pW),
            "lf_d": float(D), "lf_p_ref": float(pD), "lf_ref_sims": LF_REF_SIMS,
            "ad_a": float(A), "ad_p": float(pA),
            "cvm_c": cvm(x),
            "jb": J, "jb_p": pJ, "ajb": Ja, "ajb_p": pJa,
        }
        records.append(rec)
        print(n, fam, f"W={W:.6f} D={D:.6f} A={A:.6f}")

out = {
  "description": "Golden normality-test reference values. Samples drawn with numpy PCG64.",
  "generator_seed": SEED,
  "reference": "scipy.stats.shapiro (AS R94), statsmodels normal_ad (Stephens modified statistic), classical two-sided Lilliefors D with 200k-simulation Monte Carlo p-values, chi2(2) Jarque-Bera",
  "records": records,
}
with open("golden_stats.json", "w") as f:
    json.dump(out, f, indent=1)
print("wrote", len(records), "records")
