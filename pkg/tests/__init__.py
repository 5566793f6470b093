"""
Тесты библиотеки динамических вогнутых полезностей
"""
