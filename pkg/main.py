from qc_dbang.cli import main

if __name__ == "__main__":
    # python main.py serve --port 8180 启动 JSON 服务, 其余子命令见 --help
    main()
