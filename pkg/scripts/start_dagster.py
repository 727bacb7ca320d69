"""
Launch `dagster dev` on the sgprelax definitions

Before the server starts, the built-in corpus is parsed and the P1 ECPR
fixture is solved. --skip-checks goes straight to the server.
"""
import argparse
import os
import shutil
import subprocess
import sys

DEFINITIONS = os.path.join("dagster_pipeline", "__init__.py")


def preflight() -> bool:
    """Corpus parses and the cheapest fixture reproduces its printed bound"""
    try:
        from sgprelax.corpus import builtin_corpus
        from sgprelax.fixtures import FIXTURES, run_fixture
    except ImportError as e:
        print(f"❌ sgprelax is not importable ({e}); install it with `pip install -e .`")
        return False

    entries = builtin_corpus()
    print(f"📊 Corpus: {', '.join(entry.name for entry in entries)}")
    outcome = run_fixture(FIXTURES[0])
    if not outcome.passed:
        print(f"❌ Fixture {outcome.name}: status={outcome.status} {outcome.note}")
        return False
    print(f"✅ Fixture {outcome.name}: {outcome.objective:.4f} (printed {outcome.expected})")
    return True


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="Serve the relaxation benchmark in the Dagster UI")
    parser.add_argument("--port", type=int, default=3000)
    parser.add_argument("--skip-checks", action="store_true")
    args = parser.parse_args(argv)

    if not os.path.exists(DEFINITIONS):
        print(f"❌ {DEFINITIONS} not found; run from the repository root")
        return 1
    if shutil.which("dagster") is None:
        print("❌ The dagster CLI is not on PATH; install the package with `pip install -e .`")
        return 1

    os.environ.setdefault("DAGSTER_HOME", os.getcwd())
    print(f"📦 Bench output goes to {os.getenv('SGPRELAX_OUTPUT_DIR', os.path.join('data', 'bench'))}")
    if not args.skip_checks and not preflight():
        return 1

    print(f"🔄 Serving on http://localhost:{args.port} (Ctrl+C stops the server)")
    try:
        return subprocess.run(
            ["dagster", "dev", "-f", DEFINITIONS, "-p", str(args.port)], check=False
        ).returncode
    except KeyboardInterrupt:
        print("\n🛑 Dagster server stopped")
        return 0


if __name__ == "__main__":
    sys.exit(main())
