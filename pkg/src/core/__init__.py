#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
厳密な有理数線形代数とテンソルの基盤パッケージ
"""
