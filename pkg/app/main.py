"""
命令行主入口
CH不等式最优测量基数值分析工具

用法:
    python -m app.main curve --strategy hardy --metric q --out hardy.csv
    python -m app.main table1
    python -m app.main analytic --eta 0.7,0.8,1
    python -m app.main verify --report verify.json
"""

import sys

from app.cli import main


if __name__ == "__main__":
    sys.exit(main())
