"""
命令行接口单元测试

测试内容:
- curve 命令的 CSV/JSON/SVG 输出与多策略文件命名
- 退出码（用法错误、计算失败、I/O错误）
- 配置文件与命令行参数的优先级
- 相同种子输出逐字节一致
- verify 命令的报告与强制失败
"""

import json

import pytest

from app.cli import COMMANDS, EXIT_FAILURE, EXIT_IO, EXIT_OK, EXIT_USAGE, main
from app.cli.config import UsageError, build_run_config, load_config_file, normalize_config_text
from app.core import verifier
from app.core.chmetrics import ch_q
from app.core.states import hardy_config, make_state
from app.models.enums import Strategy
from app.models.exceptions import NoViolationFound
from app.utils.csv_parser import ANALYTIC_HEADERS, TABLE1_HEADERS, parse_curve_csv, parse_curve_json


@pytest.fixture(autouse=True)
def workspace(tmp_path, monkeypatch):
    """每个测试在临时目录中运行，单进程"""
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("CHBASES_WORKERS", "1")
    return tmp_path


def _fast_checks(monkeypatch):
    checks = [c for c in verifier.DEFAULT_CHECKS if c[0].startswith("states.")]
    monkeypatch.setattr(verifier, "DEFAULT_CHECKS", checks)
    return checks


class TestCurveCommand:
    """curve 命令测试类"""

    def test_hardy_csv(self, workspace):
        """测试Hardy曲线CSV与直接计算一致"""
        out = workspace / "hardy.csv"
        code = main(["curve", "--strategy", "hardy", "--ratios", "0.2,0.46,0.8", "--out", str(out)])
        assert code == EXIT_OK
        result = parse_curve_csv(out.read_text(encoding="utf-8"))
        assert result.success
        assert [r["ratio"] for r in result.rows] == [0.2, 0.46, 0.8]
        state = make_state(0.46)
        assert result.rows[1]["q"] == pytest.approx(ch_q(state, hardy_config(state)).q, abs=1e-12)
        assert all((r["k1"], r["k2"], r["k3"], r["k4"]) == (1, 3, 3, 1) for r in result.rows)

    def test_default_output_name(self, workspace):
        """测试未给 --out 时写 curve.csv"""
        assert main(["curve", "--strategy", "nm", "--n", "1", "--m", "7", "--ratios", "0.5"]) == EXIT_OK
        assert (workspace / "curve.csv").is_file()

    def test_multiple_strategies(self, workspace):
        """测试多策略时每个策略一个文件"""
        code = main([
            "curve", "--strategy", "hardy", "--strategy", "k", "--k", "2,8,8,2",
            "--ratios", "0.3,0.6", "--out", str(workspace / "out.csv"),
        ])
        assert code == EXIT_OK
        assert (workspace / "out_hardy.csv").is_file()
        assert (workspace / "out_k.csv").is_file()

    def test_json_output(self, workspace):
        """测试JSON输出可读回"""
        out = workspace / "curve.json"
        code = main(["curve", "--strategy", "hardy", "--ratios", "0.3,0.6", "--format", "json", "--out", str(out)])
        assert code == EXIT_OK
        content = out.read_text(encoding="utf-8")
        assert json.loads(content)["meta"]["strategy"] == "hardy"
        assert len(parse_curve_json(content)) == 2

    def test_svg_output(self, workspace):
        """测试SVG图与同名CSV数据文件"""
        out = workspace / "plot.svg"
        code = main([
            "curve", "--strategy", "hardy", "--strategy", "nm", "--metric", "eta",
            "--ratios", "0.2:0.8:4", "--format", "svg", "--out", str(out),
        ])
        assert code == EXIT_OK
        assert "<svg" in out.read_text(encoding="utf-8")
        assert (workspace / "plot_hardy.csv").is_file()
        assert (workspace / "plot_nm.csv").is_file()

    def test_ksearch_cached(self, workspace):
        """测试指数搜索结果写入缓存且再次运行输出一致"""
        args = [
            "curve", "--strategy", "ksearch", "--ratios", "0.4,0.7",
            "--kmax-coarse", "4", "--kmax", "16", "--refine-rounds", "2",
            "--cache-dir", str(workspace / "cache"),
        ]
        assert main(args + ["--out", "a.csv"]) == EXIT_OK
        assert len(list((workspace / "cache").glob("*.json"))) == 1
        assert main(args + ["--out", "b.csv"]) == EXIT_OK
        assert (workspace / "a.csv").read_bytes() == (workspace / "b.csv").read_bytes()

    def test_maxq_deterministic(self, workspace, monkeypatch):
        """测试相同种子、不同进程数输出逐字节一致"""
        base = ["curve", "--strategy", "maxq", "--ratios", "0.3,0.7", "--samples", "10", "--no-cache"]
        assert main(base + ["--out", "one.csv"]) == EXIT_OK
        monkeypatch.setenv("CHBASES_WORKERS", "2")
        assert main(base + ["--out", "two.csv"]) == EXIT_OK
        assert (workspace / "one.csv").read_bytes() == (workspace / "two.csv").read_bytes()
        assert not (workspace / ".chbases_cache").exists()


class TestExitCodes:
    """退出码测试类"""

    @pytest.mark.parametrize("argv", [
        ["curve", "--ratios", "0:1:5"],
        ["curve", "--strategy", "k", "--k", "1,2,3"],
        ["curve", "--strategy", "k"],
        ["curve", "--strategy", "nm", "--n", "4", "--m", "4"],
        ["curve", "--strategy", "bogus"],
        ["curve", "--samples", "0"],
        ["analytic", "--eta", "0.60"],
        ["table1", "--format", "svg"],
        ["nonexistent"],
    ])
    def test_usage_errors(self, argv):
        """测试用法错误返回2"""
        assert main(argv) == EXIT_USAGE

    def test_no_command(self):
        """测试缺少子命令"""
        assert main([]) == EXIT_USAGE

    def test_version(self, capsys):
        """测试 --version 返回0"""
        assert main(["--version"]) == EXIT_OK
        assert "chbases" in capsys.readouterr().out

    def test_missing_config(self, workspace):
        """测试配置文件不存在返回3"""
        assert main(["curve", "--config", str(workspace / "missing.yaml")]) == EXIT_IO

    def test_unwritable_output(self, workspace):
        """测试输出路径为目录时返回3"""
        (workspace / "dir.csv").mkdir()
        assert main(["curve", "--ratios", "0.5", "--out", str(workspace / "dir.csv")]) == EXIT_IO

    def test_computation_failure(self, monkeypatch):
        """测试计算异常返回1"""
        def failing(config):
            raise NoViolationFound("no violation")

        monkeypatch.setitem(COMMANDS, "curve", failing)
        assert main(["curve", "--ratios", "0.5"]) == EXIT_FAILURE

    def test_ratio_one(self, workspace):
        """测试 α/β = 1 时固定测量基族正常输出"""
        assert main(["curve", "--strategy", "k", "--k", "1,2,3,4", "--ratios", "1.0"]) == EXIT_OK


class TestConfigFile:
    """配置文件测试类"""

    def test_key_value_lines(self):
        """测试 key = value 行规范化"""
        assert normalize_config_text("seed = 5\nratios: 0.1,0.2") == "seed: 5\nratios: 0.1,0.2\n"

    def test_load(self, workspace):
        """测试读取并规范化键名"""
        path = workspace / "run.conf"
        path.write_text("seed = 7\nmax-iterations = 20\nratios = 0.5\nk = [1, 3, 3, 1]\n", encoding="utf-8")
        data = load_config_file(str(path))
        assert data == {"seed": 7, "max_iterations": 20, "ratios": "0.5", "k": "1,3,3,1"}

    def test_precedence(self, workspace):
        """测试优先级：默认值 < 配置文件 < 命令行"""
        path = workspace / "run.yaml"
        path.write_text("seed: 11\nratios: '0.3,0.6'\nsamples: 50\n", encoding="utf-8")
        config = build_run_config("curve", {"ratios": "0.4"}, str(path))
        assert config.seed == 11
        assert config.samples == 50
        assert config.ratios == "0.4"
        assert config.tolerance == 1e-10
        assert config.strategy == [Strategy.HARDY]

    def test_unknown_key(self, workspace):
        """测试未知键"""
        path = workspace / "bad.yaml"
        path.write_text("colour: red\n", encoding="utf-8")
        with pytest.raises(UsageError):
            build_run_config("curve", {}, str(path))
        assert main(["curve", "--config", str(path)]) == EXIT_USAGE

    def test_nested_rejected(self, workspace):
        """测试嵌套映射"""
        path = workspace / "nested.yaml"
        path.write_text("optimizer:\n  seed: 1\n", encoding="utf-8")
        with pytest.raises(UsageError):
            load_config_file(str(path))

    def test_config_drives_command(self, workspace):
        """测试配置文件参数生效"""
        path = workspace / "run.yaml"
        path.write_text("strategy: nm\nn: 1\nm: 7\nratios: '0.5'\n", encoding="utf-8")
        assert main(["curve", "--config", str(path), "--out", "nm.csv"]) == EXIT_OK
        rows = parse_curve_csv((workspace / "nm.csv").read_text(encoding="utf-8")).rows
        assert (rows[0]["k1"], rows[0]["k2"]) == (1, 7)


class TestOtherCommands:
    """analytic / verify 命令测试类"""

    def test_analytic(self, workspace):
        """测试解析前沿输出"""
        assert main(["analytic", "--eta", "0.8,0.9,1"]) == EXIT_OK
        lines = (workspace / "analytic.csv").read_text(encoding="utf-8").splitlines()
        assert lines[0] == ",".join(ANALYTIC_HEADERS)
        assert len(lines) == 4

    def test_verify_report(self, workspace, monkeypatch):
        """测试 verify 报告"""
        checks = _fast_checks(monkeypatch)
        assert main(["verify", "--report", "verify.json"]) == EXIT_OK
        report = json.loads((workspace / "verify.json").read_text(encoding="utf-8"))
        assert report["passed"] is True
        assert report["total"] == len(checks)

    def test_verify_deterministic(self, workspace, monkeypatch):
        """测试 verify 报告逐字节一致"""
        _fast_checks(monkeypatch)
        assert main(["verify", "--report", "a.json"]) == EXIT_OK
        assert main(["verify", "--report", "b.json"]) == EXIT_OK
        assert (workspace / "a.json").read_bytes() == (workspace / "b.json").read_bytes()

    def test_verify_tampered(self, monkeypatch):
        """测试容差倍率为0时返回1"""
        _fast_checks(monkeypatch)
        assert main(["verify", "--tamper-tolerance", "0"]) == EXIT_FAILURE

    def test_table1_headers(self):
        """测试 Table I 表头"""
        assert TABLE1_HEADERS[:5] == ["ratio", "k1", "k2", "k3", "k4"]
