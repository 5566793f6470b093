#!/usr/bin/env python3
"""
Динамические вогнутые полезности - главный файл запуска
"""
import argparse
import json
import sys
from pathlib import Path

# Добавление пути к проекту
sys.path.insert(0, str(Path(__file__).parent))

from pipeline.compare import compare
from pipeline.runner import EXIT_OK, EXIT_OTHER, EXIT_SCENARIO, ScenarioRunner
from utils.logger import setup_logger

logger = setup_logger(__name__)


def run_scenario(args) -> int:
    """
    Запуск сценария.

    Args:
        args: Аргументы командной строки.
    """
    runner = ScenarioRunner(settings_path=args.settings, threads=args.threads, output_dir=args.out)
    return runner.run(args.config)


def run_compare(args) -> int:
    """Сравнение двух манифестов; отчёт печатается в stdout в формате JSON."""
    try:
        report = compare(args.manifest_a, args.manifest_b)
    except (OSError, json.JSONDecodeError) as e:
        logger.error(f"Не удалось прочитать манифест: {e}")
        return EXIT_SCENARIO
    print(json.dumps(report.to_dict(), sort_keys=True, indent=2, ensure_ascii=False))
    return EXIT_OK


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("число потоков должно быть ≥ 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Динамические вогнутые полезности: BSDE и двойственное представление",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Примеры использования:
  %(prog)s run config/scenarios/entropic.yaml
  %(prog)s run config/scenarios/entropic.yaml --threads 4 --out results/entropic
  %(prog)s compare results/a/manifest.json results/b/manifest.json
        """
    )
    parser.add_argument(
        "--settings",
        default=None,
        help="Путь к настройкам библиотеки (по умолчанию config/config.yaml)"
    )
    sub = parser.add_subparsers(dest="mode", required=True)

    run = sub.add_parser("run", help="Запуск сценария")
    run.add_argument("config", help="YAML-файл сценария")
    run.add_argument("--threads", type=_positive_int, default=None, help="Число потоков")
    run.add_argument("--out", default=None, help="Каталог результатов")
    run.set_defaults(handler=run_scenario)

    cmp = sub.add_parser("compare", help="Сравнение двух манифестов")
    cmp.add_argument("manifest_a")
    cmp.add_argument("manifest_b")
    cmp.set_defaults(handler=run_compare)
    return parser


def main(argv=None) -> int:
    """Главная функция"""
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except KeyboardInterrupt:
        logger.warning("Прерывание...")
        return EXIT_OTHER
    except Exception as e:
        logger.error(f"Непредвиденная ошибка: {e.__class__.__name__}: {e}")
        return EXIT_OTHER


if __name__ == "__main__":
    sys.exit(main())
