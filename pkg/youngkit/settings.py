# Quadrature
rel_tol = 1e-9
abs_tol = 1e-12
max_depth = 30
base_rule = "gk21"
singular_cutoff = 1e-3

# Verdicts
verdict_tol = 1e-8
c_tol = 1e-8
fenchel_tol = 1e-10
strict_gray_zone = 1e-4

# Monotone functions
monotone_slack = 1e-12
monotone_samples = 33
bisection_tol = 1e-12
bisection_max_iter = 200

# Convex functions and conjugates
conjugate_grid_n = 4096
conjugate_xatol = 1e-12
fd_step = 1e-6
shape_samples = 65
shape_tol = 1e-10

# c-transforms
ctransform_grid_n = 1024

# Inverse error function
erfinv_z_max = 0.9
erfinv_k_max = 400
erfinv_tail_tol = 1e-17
erfinv_dps = 60

# Higher dimensional analogue
max_ndim = 4

# Sweeps
sweep_seed = 42
sweep_count = 500
# None reads YOUNGKIT_THREADS when a sweep starts, then falls back to the cpu count
threads = None
