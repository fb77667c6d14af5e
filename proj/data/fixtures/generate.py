import numpy as np, datetime as dt

rng = np.random.default_rng(20150101)
start = dt.date(2015, 1, 1)
dates = [start + dt.timedelta(days=i) for i in range(730)]
assert dates[-1] == dt.date(2016, 12, 30)
n = len(dates)

def gbm(n, s0, mu, sig):
    r = rng.normal(mu, sig, n)
    return s0 * np.exp(np.cumsum(r))

vc  = gbm(n, 8.0, 0.0002, 0.02)          # velocity proxy
etr = gbm(n, 3.0, 0.0001, 0.03)
hr  = gbm(n, 300.0, 0.003, 0.01)         # hash rate trends up
abi = np.clip(gbm(n, 20.0, 0.0005, 0.04), 1, 100)
abv = np.clip(gbm(n, 15.0, 0.0008, 0.05), 1, 100)
gp   = gbm(n, 1180.0, -0.0001, 0.008)
yuan = gbm(n, 6.2, 0.0001, 0.002)
bv   = np.clip(gbm(n, 18.0, 0.0, 0.03), 8, 60)
usv  = np.clip(gbm(n, 16.0, 0.0, 0.03), 8, 60)

# BPI driven by the regressors in logs plus noise
logbpi = (5.5 + 0.35*np.log(etr) - 0.2*np.log(vc) + 0.1*np.log(hr)
          + 0.05*np.log(abi) + 0.04*np.log(abv) - 0.3*np.log(yuan/6.2)
          + 0.06*np.log(bv/18.0) + 0.05*np.log(usv/16.0) - 0.02*np.log(gp/1180.0)
          + rng.normal(0, 0.05, n))
bpi = np.exp(logbpi - logbpi.mean() + np.log(400.0))

def write(fname, cols, mask=None):
    with open(fname, 'w') as f:
        f.write('date,' + ','.join(c for c, _ in cols) + '\n')
        for i, d in enumerate(dates):
            if mask is not None and not mask[i]:
                continue
            f.write(d.isoformat() + ',' + ','.join('%.10g' % s[i] for _, s in cols) + '\n')

write('bitcoin.csv', [('bpi', bpi), ('vc', vc), ('etr', etr), ('hr', hr)])
write('trends.csv',  [('abi', abi), ('abv', abv)])
# market data: weekdays only, and 2015-01-01 (a Thursday holiday) missing
mask = [(d.weekday() < 5) and d != dt.date(2015, 1, 1) for d in dates]
write('market.csv',  [('gold', gp), ('yuan', yuan), ('bv', bv), ('usv', usv)], mask)
print('rows bitcoin/trends:', n, 'market:', sum(mask))
