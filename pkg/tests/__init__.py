"""
测试包
包含所有单元测试

测试文件:
- test_states.py: 量子态与测量基族
- test_chmetrics.py: CH违背量与阈值效率
- test_optimizer.py: 多起点共轭梯度
- test_k_search.py: 指数空间搜索
- test_analytic.py: 解析特征值分析
- test_verifier.py: 不变量检查套件
- test_utils.py: 网格解析、文件读写、统计、SVG与缓存
- test_cli.py: 命令行接口
"""
