#!/usr/bin/env python3
"""
Write the catalog models as JSON documents under mdp-app/models
"""
import os
import shutil
import sys

APP_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'mdp-app')
sys.path.insert(0, APP_DIR)

from catalog.examples import (  # noqa: E402
    example_dirichlet,
    example_indicator,
    random_finite,
    split_absorbing,
)
from core.io import save_model  # noqa: E402
from core.validation import validate_model  # noqa: E402

MODELS_DIR = os.path.join(APP_DIR, 'models')

# Start from an empty directory
if os.path.exists(MODELS_DIR):
    shutil.rmtree(MODELS_DIR)
    print(f"🗑️  Removed existing models: {MODELS_DIR}")
os.makedirs(MODELS_DIR)

print(f"🚀 Writing catalog models to: {MODELS_DIR}")

models = [
    ('indicator.json', example_indicator(101)),
    ('dirichlet.json', example_dirichlet(50)),
    ('split_absorbing.json', split_absorbing()),
] + [
    (f'random-seed{seed}.json', random_finite(6, 3, seed=seed, sparsity=0.2))
    for seed in range(5)
]

written = 0
for filename, model in models:
    report = validate_model(model)
    if not report.ok:
        print(f"❌ {model.name}: {'; '.join(report.violations)}")
        continue
    save_model(model, os.path.join(MODELS_DIR, filename))
    written += 1

print(f"✅ Catalog written with {written} models!")
print(f"📁 Models location: {MODELS_DIR}")
